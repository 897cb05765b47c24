#include "ancap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ancap/error.hpp"

namespace ancap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_geometry: return "invalid geometry";
    case ErrorKind::invalid_parameter: return "invalid parameter";
    case ErrorKind::degenerate_geometry: return "degenerate geometry";
    case ErrorKind::resource_limit: return "resource limit";
    case ErrorKind::solver_failure: return "solver failure";
    case ErrorKind::numerical_breakdown: return "numerical breakdown";
    case ErrorKind::inconsistency: return "inconsistency";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::geometry_collision: return "geometry collision";
    case ErrorKind::domain_error: return "domain error";
    case ErrorKind::io_error: return "i/o error";
  }
  return "unknown";
}

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Even-odd crossing test against a closed polyline.
bool inside_polyline(cplx p, const std::vector<cplx>& poly) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const cplx a = poly[i];
    const cplx b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = (b.real() - a.real()) * (p.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
      if (p.real() < x) in = !in;
    }
  }
  return in;
}

double cross(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double s = ((p - a) * std::conj(d)).real() / len2;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

bool segments_intersect(cplx p0, cplx p1, cplx q0, cplx q1) {
  const double d1 = cross(p1 - p0, q0 - p0);
  const double d2 = cross(p1 - p0, q1 - p0);
  const double d3 = cross(q1 - q0, p0 - q0);
  const double d4 = cross(q1 - q0, p1 - q0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return false;
}

struct BoundingCircle {
  cplx center;
  double radius;
};

BoundingCircle bounding_circle(const std::vector<cplx>& pts) {
  cplx c{};
  for (cplx p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double r = 0.0;
  for (cplx p : pts) r = std::max(r, std::abs(p - c));
  return {c, r};
}

}  // namespace

// ---------------------------------------------------------------------------
// BoundaryCurve

BoundaryCurve BoundaryCurve::circle(cplx center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !finite(center))
    throw Error(ErrorKind::invalid_geometry, "circle radius must be positive and finite");
  BoundaryCurve c;
  c.kind_ = Kind::circle;
  c.center_ = center;
  c.radius_ = radius;
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(cplx center, double major, double angle, double ratio) {
  if (!(major > 0.0) || !std::isfinite(major) || !finite(center) || !std::isfinite(angle))
    throw Error(ErrorKind::invalid_geometry, "ellipse major axis must be positive and finite");
  if (!(ratio > 0.0) || ratio > 1.0)
    throw Error(ErrorKind::invalid_geometry, "ellipse axis ratio must lie in (0, 1]");
  BoundaryCurve c;
  c.kind_ = Kind::ellipse;
  c.center_ = center;
  c.major_ = major;
  c.angle_ = angle;
  c.ratio_ = ratio;
  return c;
}

BoundaryCurve BoundaryCurve::polygon(std::vector<cplx> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorKind::invalid_geometry, "polygon needs at least 3 vertices");
  for (cplx v : vertices)
    if (!finite(v)) throw Error(ErrorKind::invalid_geometry, "polygon vertex is not finite");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (vertices[i] == vertices[j])
        throw Error(ErrorKind::invalid_geometry, "polygon vertices must be pairwise distinct");
  // Non-adjacent edges must not meet; adjacent edges must not fold back.
  for (std::size_t i = 0; i < n; ++i) {
    const cplx p0 = vertices[i], p1 = vertices[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const cplx q0 = vertices[j], q1 = vertices[(j + 1) % n];
      if (adjacent) {
        const cplx shared = (j == i + 1) ? p1 : p0;
        const cplx u = (j == i + 1) ? p0 - shared : p1 - shared;
        const cplx v = (j == i + 1) ? q1 - shared : q0 - shared;
        if (cross(u, v) == 0.0 && (u * std::conj(v)).real() > 0.0)
          throw Error(ErrorKind::invalid_geometry, "polygon edges overlap");
        continue;
      }
      if (segment_distance(p0, p1, q0, q1) == 0.0)
        throw Error(ErrorKind::invalid_geometry, "polygon is self-intersecting");
    }
  }
  BoundaryCurve c;
  c.kind_ = Kind::polygon;
  c.vertices_ = std::move(vertices);
  c.corners_.resize(n);
  for (std::size_t k = 0; k < n; ++k) c.corners_[k] = two_pi * static_cast<double>(k) / static_cast<double>(n);
  return c;
}

BoundaryCurve BoundaryCurve::custom(Evaluator evaluator, std::vector<double> corners) {
  if (!evaluator) throw Error(ErrorKind::invalid_geometry, "custom curve needs an evaluator");
  for (std::size_t i = 0; i < corners.size(); ++i) {
    if (!(corners[i] >= 0.0 && corners[i] < two_pi))
      throw Error(ErrorKind::invalid_parameter, "corner parameters must lie in [0, 2*pi)");
    if (i > 0 && !(corners[i] > corners[i - 1]))
      throw Error(ErrorKind::invalid_parameter, "corner parameters must be strictly increasing");
  }
  BoundaryCurve c;
  c.kind_ = Kind::custom;
  c.evaluator_ = std::move(evaluator);
  c.corners_ = std::move(corners);
  return c;
}

CurvePoint BoundaryCurve::evaluate_base(double t) const {
  switch (kind_) {
    case Kind::circle: {
      const cplx e = std::polar(radius_, t);
      return {center_ + e, imag_unit * e, -e};
    }
    case Kind::ellipse: {
      const cplx rot = std::polar(0.5 * major_, angle_);
      const double c = std::cos(t), s = std::sin(t);
      return {center_ + rot * cplx(c, -ratio_ * s), rot * cplx(-s, -ratio_ * c), rot * cplx(-c, ratio_ * s)};
    }
    case Kind::polygon: {
      const std::size_t n = vertices_.size();
      const double span = two_pi / static_cast<double>(n);
      double k_real = std::floor(t / span);
      std::size_t k = static_cast<std::size_t>(std::max(0.0, k_real)) % n;
      double local = t - k_real * span;
      // On a corner (or at t = 2*pi) use the edge arriving at that vertex.
      const bool at_corner = std::abs(local) <= 8.0 * std::numeric_limits<double>::epsilon() * two_pi;
      if (t >= two_pi) {
        k = 0;
        local = 0.0;
      }
      const std::size_t edge = at_corner || t >= two_pi ? (k + n - 1) % n : k;
      const cplx d = (vertices_[(edge + 1) % n] - vertices_[edge]) / span;
      const cplx z = at_corner || t >= two_pi ? vertices_[k] : vertices_[k] + d * local;
      return {z, d, cplx{}};
    }
    case Kind::custom:
      return evaluator_(t);
  }
  return {};
}

CurvePoint BoundaryCurve::evaluate(double t) const {
  CurvePoint p = evaluate_base(t);
  return {scale_ * p.z + shift_, scale_ * p.dz, scale_ * p.d2z};
}

cplx BoundaryCurve::center() const {
  switch (kind_) {
    case Kind::circle:
    case Kind::ellipse:
      return scale_ * center_ + shift_;
    case Kind::polygon: {
      cplx c{};
      for (cplx v : vertices_) c += v;
      return scale_ * (c / static_cast<double>(vertices_.size())) + shift_;
    }
    case Kind::custom: {
      const auto pts = sample(256);
      cplx c{};
      for (cplx p : pts) c += p;
      return c / 256.0;
    }
  }
  return {};
}

std::vector<cplx> BoundaryCurve::vertices() const {
  std::vector<cplx> out;
  out.reserve(vertices_.size());
  for (cplx v : vertices_) out.push_back(scale_ * v + shift_);
  return out;
}

Orientation BoundaryCurve::orientation() const {
  const auto pts = sample(512);
  double area = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) area += cross(pts[i], pts[(i + 1) % pts.size()]);
  return area >= 0.0 ? Orientation::positive : Orientation::negative;
}

BoundaryCurve BoundaryCurve::transformed(cplx scale, cplx shift) const {
  if (scale == cplx{} || !finite(scale) || !finite(shift))
    throw Error(ErrorKind::invalid_geometry, "curve transform needs a nonzero finite scale");
  BoundaryCurve c = *this;
  c.scale_ = scale * scale_;
  c.shift_ = scale * shift_ + shift;
  return c;
}

std::vector<cplx> BoundaryCurve::sample(int count) const {
  std::vector<cplx> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = evaluate(two_pi * k / count).z;
  return out;
}

// ---------------------------------------------------------------------------
// Slits

Slit slit_from_endpoints(cplx a, cplx b) {
  if (!finite(a) || !finite(b)) throw Error(ErrorKind::invalid_geometry, "slit endpoints must be finite");
  if (a == b) throw Error(ErrorKind::invalid_geometry, "slit endpoints coincide");
  Slit s;
  s.a = a;
  s.b = b;
  s.angle = std::arg(b - a);
  s.length = std::abs(b - a);
  s.center = 0.5 * (a + b);
  return s;
}

double segment_distance(cplx p0, cplx p1, cplx q0, cplx q1) {
  if (segments_intersect(p0, p1, q0, q1)) return 0.0;
  return std::min({point_segment_distance(p0, q0, q1), point_segment_distance(p1, q0, q1),
                   point_segment_distance(q0, p0, p1), point_segment_distance(q1, p0, p1)});
}

SlitSet::SlitSet(std::vector<Slit> slits) : slits_(std::move(slits)) {
  if (slits_.empty()) throw Error(ErrorKind::invalid_geometry, "slit set is empty");
  for (const Slit& s : slits_)
    if (!(s.length > 0.0)) throw Error(ErrorKind::invalid_geometry, "slit has zero length");
  for (std::size_t i = 0; i < slits_.size(); ++i)
    for (std::size_t j = i + 1; j < slits_.size(); ++j)
      if (!(segment_distance(slits_[i].a, slits_[i].b, slits_[j].a, slits_[j].b) > 0.0)) {
        std::ostringstream os;
        os << "slits " << i << " and " << j << " touch or overlap";
        throw Error(ErrorKind::invalid_geometry, os.str());
      }
}

SlitSet SlitSet::transformed(cplx scale, cplx shift) const {
  std::vector<Slit> out;
  out.reserve(slits_.size());
  for (const Slit& s : slits_) out.push_back(slit_from_endpoints(scale * s.a + shift, scale * s.b + shift));
  return SlitSet(std::move(out));
}

SlitSet cantor_slits(int k) {
  if (k < 0) throw Error(ErrorKind::invalid_parameter, "Cantor level must be non-negative");
  if (k > 12) throw Error(ErrorKind::resource_limit, "Cantor level above 12 exceeds the node budget");
  std::vector<std::pair<double, double>> level{{-1.0, 1.0}};
  for (int i = 0; i < k; ++i) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * level.size());
    for (auto [a, b] : level) next.emplace_back(a / 3.0 - 2.0 / 3.0, b / 3.0 - 2.0 / 3.0);
    for (auto [a, b] : level) next.emplace_back(a / 3.0 + 2.0 / 3.0, b / 3.0 + 2.0 / 3.0);
    level = std::move(next);
  }
  std::vector<Slit> slits;
  slits.reserve(level.size());
  for (auto [a, b] : level) slits.push_back(slit_from_endpoints(a, b));
  return SlitSet(std::move(slits));
}

// ---------------------------------------------------------------------------
// Compact sets

double sampled_separation(const BoundaryCurve& c1, const BoundaryCurve& c2, int samples) {
  const auto p1 = c1.sample(samples);
  const auto p2 = c2.sample(samples);
  if (inside_polyline(p1.front(), p2) || inside_polyline(p2.front(), p1)) return -1.0;
  double best = std::numeric_limits<double>::infinity();
  for (cplx a : p1)
    for (cplx b : p2) best = std::min(best, std::abs(a - b));
  return best;
}

void check_disjoint(const std::vector<BoundaryCurve>& curves, double threshold) {
  const std::size_t m = curves.size();
  std::vector<BoundingCircle> bounds(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (curves[i].kind() == BoundaryCurve::Kind::circle)
      bounds[i] = {curves[i].center(), curves[i].radius() * std::abs(curves[i].evaluate(0.0).dz) /
                                           std::max(curves[i].radius(), 1e-300)};
    else
      bounds[i] = bounding_circle(curves[i].sample(256));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = std::abs(bounds[i].center - bounds[j].center);
      double sep;
      if (curves[i].kind() == BoundaryCurve::Kind::circle && curves[j].kind() == BoundaryCurve::Kind::circle) {
        sep = d - bounds[i].radius - bounds[j].radius;
      } else {
        // Bounding circles already apart: nothing to sample.
        if (d > 1.05 * (bounds[i].radius + bounds[j].radius) + threshold) continue;
        sep = sampled_separation(curves[i], curves[j]);
      }
      if (!(sep > threshold)) {
        std::ostringstream os;
        os << "components " << i << " and " << j << " are not disjoint";
        throw Error(ErrorKind::invalid_geometry, os.str());
      }
    }
  }
}

CompactSetSpec CompactSetSpec::jordan(std::vector<BoundaryCurve> curves, std::vector<std::string> labels) {
  if (curves.empty()) throw Error(ErrorKind::invalid_geometry, "compact set has no components");
  if (!labels.empty() && labels.size() != curves.size())
    throw Error(ErrorKind::invalid_parameter, "label count does not match component count");
  check_disjoint(curves);
  CompactSetSpec s;
  s.curves_ = std::move(curves);
  s.labels_ = std::move(labels);
  return s;
}

CompactSetSpec CompactSetSpec::slit_set(SlitSet slits, std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != slits.size())
    throw Error(ErrorKind::invalid_parameter, "label count does not match component count");
  CompactSetSpec s;
  s.slits_ = std::move(slits);
  s.labels_ = std::move(labels);
  return s;
}

const SlitSet& CompactSetSpec::slits() const {
  if (!slits_) throw Error(ErrorKind::invalid_parameter, "compact set is not a slit set");
  return *slits_;
}

std::size_t CompactSetSpec::size() const { return slits_ ? slits_->size() : curves_.size(); }

CompactSetSpec CompactSetSpec::subset(const std::string& label) const {
  if (labels_.empty()) throw Error(ErrorKind::invalid_parameter, "compact set carries no labels");
  if (slits_) {
    std::vector<Slit> picked;
    std::vector<std::string> picked_labels;
    for (std::size_t i = 0; i < slits_->size(); ++i)
      if (labels_[i] == label) {
        picked.push_back((*slits_)[i]);
        picked_labels.push_back(label);
      }
    return slit_set(SlitSet(std::move(picked)), std::move(picked_labels));
  }
  CompactSetSpec s;
  for (std::size_t i = 0; i < curves_.size(); ++i)
    if (labels_[i] == label) {
      s.curves_.push_back(curves_[i]);
      s.labels_.push_back(label);
    }
  if (s.curves_.empty()) throw Error(ErrorKind::invalid_geometry, "no component carries label " + label);
  return s;
}

}  // namespace ancap
