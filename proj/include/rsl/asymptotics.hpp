#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rsl/problem.hpp"

namespace rsl {

/// A, B = (1/2) int_0^x q sin|cos(s Delta / p1),  C, D = (1/2) int_{pi/2}^x q sin|cos(s Delta / p2).
/// A and B are taken at min(x, pi/2), C and D at max(x, pi/2).
struct QuadTerms {
  double x = 0.0;
  double s = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

struct AsymptoticPrediction {
  int n = 0;
  double s_leading = 0.0;
  std::optional<double> s_refined;
  std::optional<double> delta_n;  // s_refined - s_leading
  /// A(pi/2), B(pi/2), C(pi), D(pi) at s_leading.
  QuadTerms terms;
  /// Why s_refined is absent.
  std::string unavailable_reason;
};

/// Coefficient of B(pi/2) inside the left refined eigenfunction. The eigenvalue formula
/// uses d / p1; the eigenfunction display prints d.
enum class BReading { OverP1, Plain };

struct AsymptoticOptions {
  BReading eigenfunction_b = BReading::OverP1;
};

double leading_s(const ProblemSpec& spec, int n);

QuadTerms quad_terms(const ProblemSpec& spec, double x, double s);

/// Empty string when the refined formulas apply, otherwise the reason they do not.
std::string refined_unavailable_reason(const ProblemSpec& spec);

/// Throws UnavailableError when a2 = 0 or conditions a/b fail.
AsymptoticPrediction refined_s(const ProblemSpec& spec, int n);

/// Leading prediction always; refined fields only when available.
AsymptoticPrediction predict(const ProblemSpec& spec, int n);

struct DecayRow {
  double s = 0.0;
  /// s * sup_x |I_k(x, s)| for the integrals of q cos|sin(s (2t - Delta)/p) on each side.
  std::array<double, 4> scaled{};
  double max() const;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  double max_scaled = 0.0;
};

/// Throws UnavailableError unless conditions a/b hold.
DecayReport oscillatory_decay(const ProblemSpec& spec, const std::vector<double>& s_list);

/// Zeroth-order eigenfunction: a2 cos(s* x / p1) on the left and
/// (gamma1 a2 / delta1) cos(s* (x / p2 + pi (p2 - p1) / (2 p1 p2))) on the right.
double leading_eigenfunction(const ProblemSpec& spec, int n, double x);

/// Same, with the branch chosen explicitly (x = pi/2 belongs to both).
double leading_eigenfunction(const ProblemSpec& spec, int n, double x, Side side);

/// First-order eigenfunction at fixed n; constants are computed once.
class RefinedEigenfunction {
 public:
  RefinedEigenfunction(const ProblemSpec& spec, int n, const AsymptoticOptions& options = {});
  /// Left branch for x <= pi/2, right branch otherwise.
  double operator()(double x) const;
  double operator()(double x, Side side) const;

 private:
  const ProblemSpec* spec_;
  int n_;
  double s_;         // leading-order s
  double bracket_;   // eigenvalue correction bracket, as in the refined s formula
  double bracket_left_;  // same with the eigenfunction's reading of the B coefficient
  QuadTerms mid_;    // A, B at pi/2
};

double refined_eigenfunction(const ProblemSpec& spec, int n, double x,
                             const AsymptoticOptions& options = {});

}  // namespace rsl
