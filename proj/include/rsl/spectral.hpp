#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsl/problem.hpp"

namespace rsl {

struct Eigenpair {
  int n = 0;
  double s = 0.0;
  double lambda = 0.0;  // s * s
  double f_residual = 0.0;  // |F(lambda)|
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool sign_change = false;
  /// The scan values around the root were at noise level; the sign change may be spurious.
  bool suspect = false;
};

struct SpectralOptions {
  double tol_ode = 1e-10;
  double tol_root = 1e-9;
  int scan_points = 64;  // subintervals per window
  int n_reliable = 8;
  Execution execution = Execution::Parallel;
};

/// Outcome of the search in one localization window.
struct WindowReport {
  int n = 0;
  double lo = 0.0;
  double hi = 0.0;
  int sign_changes = 0;
  bool reliable = false;  // n >= n_reliable
};

struct Spectrum {
  std::vector<Eigenpair> pairs;  // sorted by s
  std::vector<WindowReport> windows;
  std::vector<std::string> warnings;

  /// Every window held exactly one sign change and no root is suspect.
  bool clean() const;
};

/// F(lambda) = w2'(pi) + d lambda w2(pi).
double characteristic(const ProblemSpec& spec, double lambda, double tol);

/// F(s^2) / s.
double scaled_characteristic(const ProblemSpec& spec, double s, double tol);

/// Window of half-width p1 p2 / (p1 + p2) around p1 p2 (2n+1) / (p1 + p2), or around
/// 2n p1 p2 / (p1 + p2) when a2 = 0.
std::pair<double, double> locate_window(const ProblemSpec& spec, int n);

/// Scan each window on a uniform sub-grid, bisect every sign change to tol_root.
Spectrum find_eigenvalues(const ProblemSpec& spec, int n_min, int n_max,
                          const SpectralOptions& options = {});

/// All sign changes of F(s^2)/s on a grid starting at grid_step/2 and ending at s_max.
/// Indices are assigned 1, 2, ... in increasing s.
Spectrum global_scan(const ProblemSpec& spec, double s_max, double grid_step,
                     const SpectralOptions& options = {});

struct EigenfunctionSample {
  double x = 0.0;
  double u = 0.0;
};

/// w1 on `samples` uniform points of [0, pi/2], then w2 on `samples` points of [pi/2, pi];
/// pi/2 appears once from each side. Unnormalized: w1(0) = a2, w1'(0) = -a1.
std::vector<EigenfunctionSample> eigenfunction(const ProblemSpec& spec, const Eigenpair& pair,
                                               int samples, double tol = 1e-10);

}  // namespace rsl
