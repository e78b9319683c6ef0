#include "rsl/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rsl/constants.hpp"

namespace rsl {

double oscillation_panel_cap(double p, double s) { return s > 0.0 ? kPi * p / (8.0 * s) : 0.0; }

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double panel_cap) {
  using boost::math::quadrature::gauss_kronrod;
  if (a == b) return 0.0;
  const double width = b - a;
  int panels = 1;
  if (panel_cap > 0.0) panels = std::max(1, static_cast<int>(std::ceil(std::abs(width) / panel_cap)));
  const double h = width / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = k + 1 == panels ? b : a + (k + 1) * h;
    sum += gauss_kronrod<double, 15>::integrate(f, lo, hi, 12, rel_tol);
  }
  return sum;
}

}  // namespace rsl
