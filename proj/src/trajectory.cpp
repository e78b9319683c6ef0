#include "rsl/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsl/errors.hpp"

namespace rsl {

Trajectory::Trajectory(Side side, double lambda, std::vector<double> nodes,
                       std::vector<Segment> segments)
    : side_(side), lambda_(lambda), nodes_(std::move(nodes)), segments_(std::move(segments)) {
  if (nodes_.size() < 2 || segments_.size() + 1 != nodes_.size()) {
    throw IntegrationError("trajectory needs one segment per mesh interval");
  }
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    if (!(nodes_[k] > nodes_[k - 1])) throw IntegrationError("trajectory mesh must be increasing");
  }
}

Trajectory Trajectory::from_hermite(Side side, double lambda, std::vector<double> nodes,
                                    std::span<const double> w, std::span<const double> dw) {
  if (w.size() != nodes.size() || dw.size() != nodes.size()) {
    throw IntegrationError("hermite data size does not match mesh");
  }
  std::vector<Segment> segs(nodes.size() - 1);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double h = nodes[k + 1] - nodes[k];
    const double w0 = w[k], w1 = w[k + 1];
    const double m0 = h * dw[k], m1 = h * dw[k + 1];
    Segment& s = segs[k];
    s.w = {w0, m0, 3 * (w1 - w0) - 2 * m0 - m1, 2 * (w0 - w1) + m0 + m1, 0.0};
    // d/dx of the cubic, expressed per unit theta and divided by h.
    s.dw = {s.w[1] / h, 2 * s.w[2] / h, 3 * s.w[3] / h, 0.0, 0.0};
  }
  return Trajectory(side, lambda, std::move(nodes), std::move(segs));
}

State Trajectory::operator()(double x) const {
  const double lo = nodes_.front();
  const double hi = nodes_.back();
  const double slack = 1e-13 * std::max(1.0, std::abs(hi));
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw IntegrationError("trajectory query at x = " + std::to_string(x) + " outside [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  x = std::clamp(x, lo, hi);
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (k >= segments_.size()) k = segments_.size() - 1;
  const double h = nodes_[k + 1] - nodes_[k];
  const double theta = (x - nodes_[k]) / h;
  return {eval_quartic(segments_[k].w, theta), eval_quartic(segments_[k].dw, theta)};
}

State Trajectory::node_state(std::size_t k) const {
  if (k == segments_.size()) {
    const auto& s = segments_.back();
    return {eval_quartic(s.w, 1.0), eval_quartic(s.dw, 1.0)};
  }
  return {segments_[k].w[0], segments_[k].dw[0]};
}

Trajectory Trajectory::scaled(double c) const {
  Trajectory out = *this;
  for (auto& s : out.segments_) {
    for (auto& v : s.w) v *= c;
    for (auto& v : s.dw) v *= c;
  }
  return out;
}

}  // namespace rsl
