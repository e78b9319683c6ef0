#pragma once

#include <functional>

namespace rsl {

/// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b], split first into equal
/// panels no wider than `panel_cap` so that oscillatory integrands with period
/// ~ 2 pi p / s are resolved before adaptivity starts. `panel_cap <= 0` means
/// a single panel.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double panel_cap = 0.0);

/// Panel cap for integrands oscillating at frequency s/p: pi p / (8 s).
double oscillation_panel_cap(double p, double s);

}  // namespace rsl
