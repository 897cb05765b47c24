#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ancap/types.hpp"

namespace ancap {

/// Value and first two derivatives of a boundary parametrization at one t.
struct CurvePoint {
  cplx z;
  cplx dz;
  cplx d2z;
};

enum class Orientation { positive, negative };

/// A 2*pi-periodic parametrized Jordan curve.
///
/// Built-in kinds:
///  - circle:  z(t) = c + r e^{it}
///  - ellipse: z(t) = c + a/2 e^{i theta} (cos t - i r sin t), traversed
///             clockwise; `major` is the full major-axis length a
///  - polygon: vertices joined by straight edges, each edge spanning an
///             equal parameter interval 2*pi/ell; the vertices are the corners
///  - custom:  user supplied evaluator plus optional corner parameters
///
/// Every curve may carry an affine map z -> scale*z + shift applied after
/// the base parametrization, which keeps translated/rotated/scaled copies
/// exact rather than re-fitted.
class BoundaryCurve {
 public:
  enum class Kind { circle, ellipse, polygon, custom };
  using Evaluator = std::function<CurvePoint(double)>;

  static BoundaryCurve circle(cplx center, double radius);
  static BoundaryCurve ellipse(cplx center, double major, double angle, double ratio);
  static BoundaryCurve polygon(std::vector<cplx> vertices);
  static BoundaryCurve custom(Evaluator evaluator, std::vector<double> corners = {});

  Kind kind() const { return kind_; }

  /// Evaluates at t in [0, 2*pi]. At a corner parameter the derivative is
  /// the one-sided limit from the left.
  CurvePoint evaluate(double t) const;

  /// Parameter values in [0, 2*pi) where the tangent jumps, increasing.
  const std::vector<double>& corners() const { return corners_; }

  cplx center() const;
  double radius() const { return radius_ * std::abs(scale_); }
  double major() const { return major_ * std::abs(scale_); }
  double angle() const { return angle_ + std::arg(scale_); }
  double ratio() const { return ratio_; }
  std::vector<cplx> vertices() const;

  /// Sign of the enclosed signed area.
  Orientation orientation() const;

  /// Returns the image of this curve under z -> scale*z + shift.
  BoundaryCurve transformed(cplx scale, cplx shift) const;

  /// count equispaced samples z(2*pi*k/count).
  std::vector<cplx> sample(int count) const;

 private:
  BoundaryCurve() = default;
  CurvePoint evaluate_base(double t) const;

  Kind kind_ = Kind::circle;
  cplx center_{};
  double radius_ = 0.0;
  double major_ = 0.0;
  double angle_ = 0.0;
  double ratio_ = 1.0;
  std::vector<cplx> vertices_;
  std::vector<double> corners_;
  Evaluator evaluator_;
  cplx scale_{1.0, 0.0};
  cplx shift_{};
};

/// A rectilinear slit [a, b] with derived angle, length and midpoint.
struct Slit {
  cplx a;
  cplx b;
  double angle = 0.0;  ///< arg(b - a) in (-pi, pi]
  double length = 0.0;
  cplx center;
};

Slit slit_from_endpoints(cplx a, cplx b);

/// Euclidean distance between two closed segments.
double segment_distance(cplx p0, cplx p1, cplx q0, cplx q1);

class SlitSet {
 public:
  /// Throws invalid_geometry if any two slits touch or overlap.
  explicit SlitSet(std::vector<Slit> slits);

  const std::vector<Slit>& slits() const { return slits_; }
  std::size_t size() const { return slits_.size(); }
  const Slit& operator[](std::size_t i) const { return slits_[i]; }

  /// Image of every slit under z -> scale*z + shift.
  SlitSet transformed(cplx scale, cplx shift) const;

 private:
  std::vector<Slit> slits_;
};

/// Level k of the middle-thirds construction on [-1, 1]: 2^k real slits of
/// length 2/3^k. k is capped at 12.
SlitSet cantor_slits(int k);

/// A compact set given either by Jordan curves or by rectilinear slits.
/// Optional labels ("E"/"F") partition components for union experiments.
class CompactSetSpec {
 public:
  static CompactSetSpec jordan(std::vector<BoundaryCurve> curves,
                               std::vector<std::string> labels = {});
  static CompactSetSpec slit_set(SlitSet slits, std::vector<std::string> labels = {});

  bool is_slit() const { return slits_.has_value(); }
  const std::vector<BoundaryCurve>& curves() const { return curves_; }
  const SlitSet& slits() const;
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const;

  /// Components whose label equals `label` (Jordan case only).
  CompactSetSpec subset(const std::string& label) const;

 private:
  CompactSetSpec() = default;
  std::vector<BoundaryCurve> curves_;
  std::optional<SlitSet> slits_;
  std::vector<std::string> labels_;
};

/// Sampled minimum distance between two curves; negative when one curve lies
/// inside the other.
double sampled_separation(const BoundaryCurve& c1, const BoundaryCurve& c2, int samples = 256);

/// Throws invalid_geometry if any two curves intersect or nest.
void check_disjoint(const std::vector<BoundaryCurve>& curves, double threshold = 1e-12);

}  // namespace ancap
