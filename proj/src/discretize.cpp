#include "ancap/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ancap/error.hpp"

namespace ancap {

namespace {

// Kress substitution on [0, 2*pi]: w(s) = 2*pi v(s)^p / (v(s)^p + v(2*pi - s)^p).
std::pair<double, double> kress_w(double s, int p) {
  const double ip = 1.0 / p;
  auto v = [&](double x) {
    const double y = (pi - x) / pi;
    return (ip - 0.5) * y * y * y + ip * (x - pi) / pi + 0.5;
  };
  auto dv = [&](double x) {
    const double y = (pi - x) / pi;
    return -(3.0 / pi) * (ip - 0.5) * y * y + ip / pi;
  };
  const double v1 = v(s), v2 = v(two_pi - s);
  const double a = std::pow(v1, p), b = std::pow(v2, p);
  const double da = p * std::pow(v1, p - 1) * dv(s);
  const double db = -p * std::pow(v2, p - 1) * dv(two_pi - s);
  const double sum = a + b;
  return {two_pi * a / sum, two_pi * (da * b - a * db) / (sum * sum)};
}

}  // namespace

NodeSet uniform_nodes(int m, int n) {
  if (m < 1) throw Error(ErrorKind::invalid_parameter, "component count must be at least 1");
  if (n < 4 || n % 2 != 0) throw Error(ErrorKind::invalid_parameter, "n must be an even integer >= 4");
  NodeSet s;
  s.m = m;
  s.n = n;
  s.t.resize(static_cast<std::size_t>(m) * n);
  for (int j = 0; j < m; ++j)
    for (int q = 0; q < n; ++q) s.t[static_cast<std::size_t>(j) * n + q] = two_pi * q / n;
  return s;
}

Grading::Grading(std::vector<double> corners, int p) : corners_(std::move(corners)), p_(p) {
  if (p < 2) throw Error(ErrorKind::invalid_parameter, "grading order p must be at least 2");
  for (std::size_t i = 0; i < corners_.size(); ++i) {
    if (!(corners_[i] >= 0.0 && corners_[i] < two_pi))
      throw Error(ErrorKind::invalid_parameter, "corner parameters must lie in [0, 2*pi)");
    if (i > 0 && !(corners_[i] > corners_[i - 1]))
      throw Error(ErrorKind::invalid_parameter, "corner parameters must be strictly increasing");
  }
}

std::pair<double, double> Grading::evaluate(double t) const {
  if (corners_.empty()) return {t, 1.0};
  const double c0 = corners_.front();
  const double wraps = std::floor((t - c0) / two_pi);
  const double base = c0 + wraps * two_pi;
  const double local = t - base;  // in [0, 2*pi)
  const std::size_t count = corners_.size();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(corners_.begin(), corners_.end(), c0 + local) -
                                           corners_.begin()) - 1;
  k = std::min(k, count - 1);
  const double lo = corners_[k];
  const double hi = k + 1 < count ? corners_[k + 1] : c0 + two_pi;
  const double width = hi - lo;
  const double s = std::clamp(two_pi * (c0 + local - lo) / width, 0.0, two_pi);
  const auto [w, dw] = kress_w(s, p_);
  return {base - c0 + lo + width / two_pi * w, dw};
}

Grading kress_grading(std::vector<double> corners, int p) { return Grading(std::move(corners), p); }

cplx trapezoid(const std::vector<cplx>& values, int n) {
  if (values.empty() || n <= 0 || values.size() % static_cast<std::size_t>(n) != 0)
    throw Error(ErrorKind::invalid_parameter, "trapezoid needs a non-empty multiple of n values");
  cplx sum{};
  for (cplx v : values) sum += v;
  return two_pi / n * sum;
}

BoundaryData assemble(const std::vector<BoundaryCurve>& curves, int n, const GradingOptions& grading) {
  if (curves.empty()) throw Error(ErrorKind::invalid_parameter, "no boundary components");
  const int m = static_cast<int>(curves.size());
  if (static_cast<double>(m) * n > 16.0 * 1024 * 1024)
    throw Error(ErrorKind::resource_limit, "total node count exceeds 2^24");
  BoundaryData d;
  d.nodes = uniform_nodes(m, n);
  const std::size_t total = d.nodes.t.size();
  d.zeta.resize(total);
  d.dzeta.resize(total);
  d.d2zeta.assign(total, cplx{});
  d.speed.resize(total);
  for (int j = 0; j < m; ++j) {
    const BoundaryCurve& c = curves[static_cast<std::size_t>(j)];
    const std::size_t offset = static_cast<std::size_t>(j) * n;
    // Every component is traversed counterclockwise; clockwise ones are
    // read backwards through t -> 2*pi - t.
    const bool flip = c.orientation() == Orientation::negative;
    const auto evaluate = [&](double t) {
      if (!flip) return c.evaluate(t);
      CurvePoint p = c.evaluate(two_pi - t);
      p.dz = -p.dz;
      return p;
    };
    std::vector<double> corners = c.corners();
    if (flip) {
      for (double& t : corners) t = t == 0.0 ? 0.0 : two_pi - t;
      std::sort(corners.begin(), corners.end());
    }
    if (corners.empty()) {
      for (int q = 0; q < n; ++q) {
        const CurvePoint p = evaluate(d.nodes.t[offset + q]);
        d.zeta[offset + q] = p.z;
        d.dzeta[offset + q] = p.dz;
        d.d2zeta[offset + q] = p.d2z;
      }
    } else {
      if (n % static_cast<int>(corners.size()) != 0) {
        std::ostringstream os;
        os << "n=" << n << " is not a multiple of the " << corners.size() << " corners of component " << j;
        throw Error(ErrorKind::invalid_parameter, os.str());
      }
      const Grading g(corners, grading.p);
      const double shift = grading.alignment == CornerAlignment::midpoint ? pi / n : 0.0;
      for (int q = 0; q < n; ++q) {
        auto [tau, dtau] = g.evaluate(d.nodes.t[offset + q] + shift);
        tau = std::fmod(tau, two_pi);
        if (tau < 0.0) tau += two_pi;
        const CurvePoint p = evaluate(tau);
        d.zeta[offset + q] = p.z;
        d.dzeta[offset + q] = p.dz * dtau;
      }
    }
  }
  for (std::size_t i = 0; i < total; ++i) d.speed[i] = std::abs(d.dzeta[i]);
  return d;
}

BoundaryData assemble(const CompactSetSpec& spec, int n, const GradingOptions& grading) {
  if (spec.is_slit())
    throw Error(ErrorKind::invalid_parameter, "slit sets are discretized through their preimage domain");
  return assemble(spec.curves(), n, grading);
}

}  // namespace ancap
