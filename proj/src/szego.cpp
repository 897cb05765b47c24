#include "ancap/szego.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ancap {

namespace {

cplx tangent(const BoundaryData& d, std::size_t i) {
  return d.speed[i] > 0.0 ? d.dzeta[i] / d.speed[i] : cplx{};
}

// p*q + r*s with a single rounding error.
double dot2(double p, double q, double r, double s) {
  const double h = p * q;
  return std::fma(r, s, h) + std::fma(p, q, -h);
}

// A(z, w) for unit tangents tz, tw and d = z - w, written as
// i (conj(tz) d - tw conj(d)) / (2 pi |d|^2). The numerator is formed from
// tangent sums and differences so that the cancellation on circles is exact
// up to rounding of the inputs.
cplx kernel_value(cplx tz, cplx tw, cplx d) {
  const double re = dot2(tz.real() - tw.real(), d.real(), tz.imag() - tw.imag(), d.imag());
  const double im = dot2(tz.real() + tw.real(), d.imag(), -(tz.imag() + tw.imag()), d.real());
  return cplx(-im, re) / (two_pi * std::norm(d));
}

}  // namespace

cplx ks_kernel(const BoundaryData& data, std::size_t i, std::size_t j) {
  if (i >= data.size() || j >= data.size()) throw Error(ErrorKind::invalid_parameter, "node index out of range");
  if (i == j) return {};
  const cplx d = data.zeta[i] - data.zeta[j];
  if (d == cplx{}) throw Error(ErrorKind::degenerate_geometry, "distinct nodes share a boundary point");
  return kernel_value(tangent(data, i), tangent(data, j), d);
}

cplx ks_kernel(const CurvePoint& z, const CurvePoint& w) {
  const cplx d = z.z - w.z;
  if (d == cplx{}) throw Error(ErrorKind::degenerate_geometry, "kernel needs two distinct points");
  const auto unit = [](cplx dz) { return dz == cplx{} ? cplx{} : dz / std::abs(dz); };
  return kernel_value(unit(z.dz), unit(w.dz), d);
}

KsOperator::KsOperator(const BoundaryData& data, const FastSumOptions& options)
    : dzeta_(data.dzeta), speed_(data.speed), n_(data.n()), sum_(data.zeta, options) {
  tangent_conj_.resize(dzeta_.size());
  for (std::size_t i = 0; i < dzeta_.size(); ++i) tangent_conj_[i] = std::conj(tangent(data, i));
}

std::vector<cplx> KsOperator::apply(const std::vector<cplx>& x) const {
  const std::size_t n = dzeta_.size();
  if (x.size() != n) throw Error(ErrorKind::invalid_parameter, "vector length does not match boundary data");
  std::vector<cplx> q1(n), q2(n);
  for (std::size_t i = 0; i < n; ++i) {
    q1[i] = speed_[i] * std::conj(x[i]);
    q2[i] = dzeta_[i] * x[i];
  }
  const auto b = sum_.apply(std::vector<const std::vector<cplx>*>{&q1, &q2});
  const cplx f = imag_unit / static_cast<double>(n_);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + f * tangent_conj_[i] * std::conj(b[0][i]) - f * b[1][i];
  return out;
}

std::vector<cplx> apply_ks_operator(const BoundaryData& data, const std::vector<cplx>& x,
                                    const FastSumOptions& options) {
  return KsOperator(data, options).apply(x);
}

Density solve_density(const BoundaryData& data, const SolverOptions& options) {
  const KsOperator k(data, options.fastsum);
  LinearOperator op;
  op.dim = k.dim();
  op.apply = [&k](const std::vector<cplx>& x) { return k.apply(x); };
  const std::vector<cplx> rhs(k.dim(), cplx(1.0 / two_pi, 0.0));
  SolveReport rep = gmres(op, rhs, options.gmres);
  if (!rep.converged) {
    std::ostringstream os;
    os << "GMRES stopped after " << rep.iterations << " iterations at relative residual "
       << rep.residual_history.back();
    throw SolverFailure(os.str(), std::move(rep));
  }
  Density d;
  d.psi = rep.solution;
  d.speed = data.speed;
  d.n = data.n();
  d.report = std::move(rep);
  return d;
}

CapacityResult capacity_from_density(const Density& density) {
  if (density.psi.size() != density.speed.size() || density.n <= 0)
    throw Error(ErrorKind::invalid_parameter, "density does not match its boundary data");
  cplx s{};
  for (std::size_t j = 0; j < density.psi.size(); ++j) s += std::conj(density.psi[j]) * density.speed[j];
  s *= two_pi / density.n;
  CapacityResult r;
  r.gamma = s.real();
  r.imag_part = s.imag();
  r.n = density.n;
  r.iterations = density.report.iterations;
  r.residual = density.report.true_residual;
  if (std::abs(s.imag()) > 1e-8 * std::max(1.0, std::abs(s.real()))) {
    std::ostringstream os;
    os << "capacity integral has imaginary part " << s.imag() << "; try a larger n";
    throw Error(ErrorKind::inconsistency, os.str());
  }
  return r;
}

int default_nodes(const std::vector<BoundaryCurve>& curves) {
  int l = 1;
  for (const auto& c : curves)
    if (!c.corners().empty()) l = std::lcm(l, static_cast<int>(c.corners().size()));
  return l * 512;
}

CapacityResult compute_capacity(const std::vector<BoundaryCurve>& curves, const CapacityOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int n = options.n > 0 ? options.n : default_nodes(curves);
  const BoundaryData data = assemble(curves, n, options.grading);
  const Density d = solve_density(data, options.solver);
  CapacityResult r = capacity_from_density(d);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CapacityResult compute_capacity(const CompactSetSpec& spec, const CapacityOptions& options) {
  if (spec.is_slit()) throw Error(ErrorKind::invalid_parameter, "use capacity_of_slits for slit sets");
  return compute_capacity(spec.curves(), options);
}

}  // namespace ancap
