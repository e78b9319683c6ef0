#include "rsl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsl/integrator.hpp"
#include "rsl/parallel.hpp"

namespace rsl {

namespace {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double noise = 0.0;  // magnitude below which scan values are indistinguishable from zero
};

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

Eigenpair refine(const ProblemSpec& spec, Bracket b, const SpectralOptions& opt) {
  Eigenpair out;
  out.suspect = std::max(std::abs(b.f_lo), std::abs(b.f_hi)) < b.noise;
  while (b.hi - b.lo > opt.tol_root) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    const double fm = scaled_characteristic(spec, mid, opt.tol_ode);
    if (fm == 0.0) {
      b.lo = std::nextafter(mid, b.lo);
      b.hi = std::nextafter(mid, b.hi);
      b.f_lo = scaled_characteristic(spec, b.lo, opt.tol_ode);
      b.f_hi = scaled_characteristic(spec, b.hi, opt.tol_ode);
      break;
    }
    if (opposite(fm, b.f_lo)) {
      b.hi = mid;
      b.f_hi = fm;
    } else {
      b.lo = mid;
      b.f_lo = fm;
    }
  }
  // Secant point of the final bracket.
  double s = 0.5 * (b.lo + b.hi);
  if (b.f_hi != b.f_lo) {
    const double t = b.lo - b.f_lo * (b.hi - b.lo) / (b.f_hi - b.f_lo);
    if (t > b.lo && t < b.hi) s = t;
  }
  out.s = s;
  out.lambda = s * s;
  out.bracket_lo = b.lo;
  out.bracket_hi = b.hi;
  out.sign_change = opposite(b.f_lo, b.f_hi);
  out.f_residual = std::abs(characteristic(spec, out.lambda, opt.tol_ode));
  return out;
}

// Sign changes of f over consecutive grid points.
std::vector<Bracket> brackets(const std::vector<double>& grid, const std::vector<double>& f,
                              double tol_ode) {
  double scale = 1.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  const double noise = 10.0 * tol_ode * scale;
  std::vector<Bracket> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (opposite(f[i], f[i + 1])) {
      out.push_back({grid[i], grid[i + 1], f[i], f[i + 1], noise});
    } else if (f[i + 1] == 0.0 && i + 2 < grid.size() && opposite(f[i], f[i + 2])) {
      out.push_back({grid[i], grid[i + 2], f[i], f[i + 2], noise});
      ++i;
    }
  }
  return out;
}

void check_options(const SpectralOptions& opt) {
  if (!(opt.tol_root >= 1e-12)) throw std::invalid_argument("tol_root must be at least 1e-12");
  if (opt.scan_points < 2) throw std::invalid_argument("scan_points must be at least 2");
}

}  // namespace

bool Spectrum::clean() const {
  for (const auto& w : windows) {
    if (w.sign_changes != 1) return false;
  }
  for (const auto& p : pairs) {
    if (p.suspect || !p.sign_change) return false;
  }
  return true;
}

double characteristic(const ProblemSpec& spec, double lambda, double tol) {
  const Trajectory w1 = solve_w1(spec, lambda, tol);
  const Trajectory w2 = solve_w2(spec, lambda, w1, tol);
  const State end = w2(kPi);
  return end.dw + spec.d * lambda * end.w;
}

double scaled_characteristic(const ProblemSpec& spec, double s, double tol) {
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  return characteristic(spec, s * s, tol) / s;
}

std::pair<double, double> locate_window(const ProblemSpec& spec, int n) {
  const double unit = spec.p1 * spec.p2 / (spec.p1 + spec.p2);
  const double center = spec.a2 != 0.0 ? unit * (2 * n + 1) : unit * 2 * n;
  return {center - unit, center + unit};
}

Spectrum find_eigenvalues(const ProblemSpec& spec, int n_min, int n_max,
                          const SpectralOptions& options) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("need 1 <= n_min <= n_max");
  check_options(options);
  const auto count = static_cast<std::size_t>(n_max - n_min + 1);
  std::vector<WindowReport> windows(count);
  std::vector<std::vector<Eigenpair>> found(count);

  for_each_index(count, options.execution, [&](std::size_t k) {
    const int n = n_min + static_cast<int>(k);
    auto [lo, hi] = locate_window(spec, n);
    lo = std::max(lo, 1e-3 * (hi - lo));
    const int m = options.scan_points;
    std::vector<double> grid(m + 1), f(m + 1);
    for (int i = 0; i <= m; ++i) {
      grid[i] = i == m ? hi : lo + (hi - lo) * i / m;
      f[i] = scaled_characteristic(spec, grid[i], options.tol_ode);
    }
    const std::vector<Bracket> bs = brackets(grid, f, options.tol_ode);
    WindowReport& w = windows[k];
    w = {n, lo, hi, static_cast<int>(bs.size()), n >= options.n_reliable};
    for (const Bracket& b : bs) {
      Eigenpair pair = refine(spec, b, options);
      pair.n = n;
      if (bs.size() > 1) pair.suspect = true;
      found[k].push_back(pair);
    }
  });

  Spectrum out;
  out.windows = std::move(windows);
  for (auto& v : found) out.pairs.insert(out.pairs.end(), v.begin(), v.end());
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.s < b.s; });
  for (const auto& w : out.windows) {
    if (w.sign_changes == 1) continue;
    std::ostringstream msg;
    msg << "window n = " << w.n << " [" << w.lo << ", " << w.hi << "] has " << w.sign_changes
        << " sign changes";
    out.warnings.push_back(msg.str());
  }
  if (spec.d == 0.0) {
    out.warnings.push_back("d = 0: windows follow the d != 0 localization; global_scan is authoritative");
  }
  return out;
}

Spectrum global_scan(const ProblemSpec& spec, double s_max, double grid_step,
                     const SpectralOptions& options) {
  check_options(options);
  const double max_step = spec.p1 * spec.p2 / (2 * (spec.p1 + spec.p2));
  if (!(grid_step > 0.0 && grid_step <= max_step * (1 + 1e-12))) {
    throw std::invalid_argument("grid_step must lie in (0, p1 p2 / (2 (p1 + p2))]");
  }
  if (!(s_max > grid_step / 2)) throw std::invalid_argument("s_max is below the first grid point");

  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double s = grid_step * (0.5 + static_cast<double>(i));
    if (s >= s_max) break;
    grid.push_back(s);
  }
  grid.push_back(s_max);
  std::vector<double> f(grid.size());
  for_each_index(grid.size(), options.execution,
                 [&](std::size_t i) { f[i] = scaled_characteristic(spec, grid[i], options.tol_ode); });

  const std::vector<Bracket> bs = brackets(grid, f, options.tol_ode);
  Spectrum out;
  out.pairs.resize(bs.size());
  for_each_index(bs.size(), options.execution,
                 [&](std::size_t k) { out.pairs[k] = refine(spec, bs[k], options); });
  for (std::size_t k = 0; k < out.pairs.size(); ++k) {
    out.pairs[k].n = static_cast<int>(k) + 1;
    if (k > 0 && out.pairs[k].s - out.pairs[k - 1].s < 10 * options.tol_root) {
      std::ostringstream msg;
      msg << "roots " << k << " and " << k + 1 << " are closer than 10 tol_root near s = "
          << out.pairs[k].s;
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

std::vector<EigenfunctionSample> eigenfunction(const ProblemSpec& spec, const Eigenpair& pair,
                                               int samples, double tol) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples per subinterval");
  const Trajectory w1 = solve_w1(spec, pair.lambda, tol);
  const Trajectory w2 = solve_w2(spec, pair.lambda, w1, tol);
  std::vector<EigenfunctionSample> out;
  out.reserve(2 * static_cast<std::size_t>(samples));
  for (const Trajectory* w : {&w1, &w2}) {
    const double lo = w->lower();
    const double hi = w->upper();
    for (int i = 0; i < samples; ++i) {
      const double x = i + 1 == samples ? hi : lo + (hi - lo) * i / (samples - 1);
      out.push_back({x, (*w)(x).w});
    }
  }
  return out;
}

}  // namespace rsl
