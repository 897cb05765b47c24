#pragma once

#include <vector>

#include "ancap/discretize.hpp"
#include "ancap/error.hpp"
#include "ancap/fastsum.hpp"
#include "ancap/krylov.hpp"

namespace ancap {

struct SolverOptions {
  GmresOptions gmres;
  FastSumOptions fastsum;
};

/// GMRES did not reach its tolerance; the report is kept for inspection.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, SolveReport report)
      : Error(ErrorKind::solver_failure, what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Node values of the density psi solving
///   psi(t) + int A(zeta(t), zeta(s)) psi(s) |zeta'(s)| ds = 1/(2 pi).
struct Density {
  std::vector<cplx> psi;
  std::vector<double> speed;
  int n = 0;
  SolveReport report;
};

struct CapacityResult {
  double gamma = 0.0;
  int n = 0;
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  double imag_part = 0.0;  ///< imaginary part of the capacity integral (should vanish)
};

/// Kerzman-Stein kernel A(zeta_i, zeta_j); zero on the diagonal. Nodes with
/// zero speed (corners hit exactly) have no tangent and contribute T = 0.
cplx ks_kernel(const BoundaryData& data, std::size_t i, std::size_t j);

/// The same kernel at two arbitrary boundary points.
cplx ks_kernel(const CurvePoint& z, const CurvePoint& w);

/// The Nystrom operator x -> x + (2 pi / n) A diag(|zeta'|) x, evaluated as
///   x + (i/n) conj(T) .* conj(B(|zeta'| .* conj x)) - (i/n) B(zeta' .* x)
/// with B_ij = 1/(zeta_i - zeta_j). Although written with conjugates, it is
/// complex-linear.
class KsOperator {
 public:
  KsOperator(const BoundaryData& data, const FastSumOptions& options = {});
  std::vector<cplx> apply(const std::vector<cplx>& x) const;
  std::size_t dim() const { return dzeta_.size(); }

 private:
  std::vector<cplx> dzeta_;
  std::vector<cplx> tangent_conj_;
  std::vector<double> speed_;
  int n_;
  CauchySummator sum_;
};

std::vector<cplx> apply_ks_operator(const BoundaryData& data, const std::vector<cplx>& x,
                                    const FastSumOptions& options = {});

/// Throws SolverFailure if GMRES does not converge.
Density solve_density(const BoundaryData& data, const SolverOptions& options = {});

/// gamma = (2 pi / n) sum Re(psi_j) |zeta'_j|. Throws inconsistency if the
/// imaginary part of the integral exceeds 1e-8 (relative to max(1, gamma)).
CapacityResult capacity_from_density(const Density& density);

struct CapacityOptions {
  int n = 0;  ///< nodes per component; 0 picks 2^9, times the corner count for cornered sets
  GradingOptions grading;
  SolverOptions solver;
};

int default_nodes(const std::vector<BoundaryCurve>& curves);

CapacityResult compute_capacity(const CompactSetSpec& spec, const CapacityOptions& options = {});
CapacityResult compute_capacity(const std::vector<BoundaryCurve>& curves, const CapacityOptions& options = {});

}  // namespace ancap
