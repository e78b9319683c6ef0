#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "rsl/constants.hpp"

namespace rsl {

/// Runs body(i) for i in [0, count). The parallel path spreads iterations over
/// OpenMP threads; the first exception (lowest index) is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Execution execution, Body&& body) {
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rsl
