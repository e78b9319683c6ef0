#include "rsl/errors.hpp"

namespace rsl {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
    : Error(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

EvalError::EvalError(double x, const std::string& what)
    : Error(what + " at x = " + std::to_string(x)), x_(x) {}

ConvergenceError::ConvergenceError(double last_ratio, const std::string& what)
    : Error(what + " (last contraction ratio " + std::to_string(last_ratio) + ")"),
      last_ratio_(last_ratio) {}

}  // namespace rsl
