#include "ancap/reference.hpp"

#include <cmath>
#include <sstream>

#include "ancap/error.hpp"

namespace ancap {

namespace {

std::string echo(std::initializer_list<std::pair<const char*, double>> args) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (auto [k, v] : args) {
    if (!first) os << ", ";
    os << k << "=" << v;
    first = false;
  }
  return os.str();
}

}  // namespace

double jacobi_theta2(double q) {
  if (!(q >= 0.0) || !(q < 1.0)) throw Error(ErrorKind::domain_error, "theta2 needs 0 <= q < 1");
  if (q == 0.0) return 0.0;
  double prod = 1.0;
  const double q2 = q * q;
  double qj = q2;
  // Factors tend to 1 geometrically; stop once the next one is 1 to working precision.
  for (int j = 1; j < 100000; ++j) {
    const double f = (1.0 - qj) * (1.0 + qj) * (1.0 + qj);
    prod *= f;
    if (std::abs(f - 1.0) < 1e-16) break;
    qj *= q2;
  }
  return 2.0 * std::pow(q, 0.25) * prod;
}

ExactValue exact_two_disks(double c, double r) {
  if (!(r > 0.0) || !(r < c) || !std::isfinite(c))
    throw Error(ErrorKind::domain_error, "two-disk formula needs 0 < r < c");
  const double p = c / r;
  const double s = std::sqrt((p - 1.0) * (p + 1.0));
  const double q = 1.0 / ((p + s) * (p + s));
  const double th = jacobi_theta2(q);
  return {0.5 * r * (p + s) * (1.0 - q) * th * th, "two-disks-theta", echo({{"c", c}, {"r", r}})};
}

ExactValue exact_square(double side) {
  if (!(side > 0.0) || !std::isfinite(side)) throw Error(ErrorKind::domain_error, "square side must be positive");
  const double value = side * gamma_quarter * gamma_quarter / (4.0 * std::pow(pi, 1.5));
  return {value, "square-gamma", echo({{"side", side}})};
}

ExactValue exact_segment(cplx a, cplx b) {
  if (a == b) throw Error(ErrorKind::domain_error, "segment endpoints coincide");
  return {0.25 * std::abs(b - a), "segment",
          echo({{"a.re", a.real()}, {"a.im", a.imag()}, {"b.re", b.real()}, {"b.im", b.imag()}})};
}

ExactValue exact_real_union(const std::vector<std::pair<double, double>>& intervals) {
  if (intervals.empty()) throw Error(ErrorKind::domain_error, "no intervals");
  double total = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    if (!(a < b)) throw Error(ErrorKind::domain_error, "interval with a >= b");
    if (i > 0 && !(intervals[i - 1].second < a))
      throw Error(ErrorKind::domain_error, "intervals overlap or are unordered");
    total += b - a;
  }
  std::ostringstream os;
  os << "count=" << intervals.size();
  return {0.25 * total, "real-union", os.str()};
}

ExactValue exact_disk(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::domain_error, "disk radius must be positive");
  return {r, "disk", echo({{"r", r}})};
}

}  // namespace ancap
