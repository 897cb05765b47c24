#pragma once

#include <utility>
#include <vector>

#include "ancap/geometry.hpp"

namespace ancap {

/// m copies of the equispaced grid s_q = 2*pi*q/n, q = 0..n-1.
struct NodeSet {
  int m = 0;
  int n = 0;
  std::vector<double> t;
};

/// Throws invalid_parameter unless m >= 1, n >= 4 and n is even.
NodeSet uniform_nodes(int m, int n);

/// Corner-grading reparametrization delta of [0, 2*pi].
///
/// On each subinterval between consecutive corners delta is the Kress
/// sigmoidal substitution of order p: it fixes the corners and its derivative
/// vanishes there to order p - 1. Without corners delta is the identity.
class Grading {
 public:
  Grading(std::vector<double> corners, int p);

  /// delta(t) and delta'(t); t may be any real, delta(t + 2*pi) = delta(t) + 2*pi.
  std::pair<double, double> evaluate(double t) const;

  const std::vector<double>& corners() const { return corners_; }
  int order() const { return p_; }

 private:
  std::vector<double> corners_;
  int p_;
};

Grading kress_grading(std::vector<double> corners, int p = 3);

/// (2*pi/n) * sum of values; values.size() must be a positive multiple of n.
cplx trapezoid(const std::vector<cplx>& values, int n);

/// Where the grid sits relative to corner parameters. `midpoint` shifts the
/// graded parameter by pi/n so no node lands on a corner; `on_node` puts
/// corner-aligned nodes exactly on the corners, where the speed is zero.
enum class CornerAlignment { midpoint, on_node };

struct GradingOptions {
  int p = 3;
  CornerAlignment alignment = CornerAlignment::midpoint;
};

/// Discretized boundary of all components, component-major.
struct BoundaryData {
  NodeSet nodes;
  std::vector<cplx> zeta;
  std::vector<cplx> dzeta;
  std::vector<cplx> d2zeta;  ///< filled for ungraded components only (zero otherwise)
  std::vector<double> speed;

  int m() const { return nodes.m; }
  int n() const { return nodes.n; }
  std::size_t size() const { return zeta.size(); }
};

/// Samples every Jordan component of `spec` on n nodes, grading the ones
/// with corners. n must be a multiple of each component's corner count.
/// Clockwise components are reversed so that all run counterclockwise.
BoundaryData assemble(const CompactSetSpec& spec, int n, const GradingOptions& grading = {});
BoundaryData assemble(const std::vector<BoundaryCurve>& curves, int n, const GradingOptions& grading = {});

}  // namespace ancap
