#pragma once

#include <vector>

#include "ancap/geometry.hpp"
#include "ancap/spectral.hpp"
#include "ancap/szego.hpp"

namespace ancap {

/// Ellipse-bounded preimage domain: component j is
///   eta_j(t) = c_j + 0.5 a_j e^{i theta_j} (cos t - i r sin t).
struct PreimageState {
  std::vector<cplx> centers;
  std::vector<double> majors;
  std::vector<double> angles;
  double ratio = 1.0;
  int iteration = 0;

  std::size_t size() const { return centers.size(); }
  std::vector<BoundaryCurve> curves() const;
};

/// Measured image slits: centers beta_j, lengths L_j and, per slit, how far
/// Im[e^{-i theta_j} Phi] strays from its mean.
struct SlitImage {
  std::vector<cplx> centers;
  std::vector<double> lengths;
  std::vector<double> flatness;
};

/// Discretized generalized Neumann kernel problem on a preimage domain, with
/// A(t) = e^{i(pi/2 - theta(t))} and g(t) = Im[e^{-i theta(t)} eta(t)].
class NeumannSystem {
 public:
  NeumannSystem(const PreimageState& state, int n, const FastSumOptions& fastsum = {});

  int m() const { return m_; }
  int n() const { return n_; }
  const std::vector<cplx>& eta() const { return eta_; }
  const std::vector<cplx>& deta() const { return deta_; }
  const std::vector<cplx>& phase() const { return phase_; }
  const std::vector<double>& align() const { return align_; }

  /// Kernel values N(s, t) and M(s, t) at node indices. On the diagonal M
  /// returns the continuous remainder M1(t, t) after removing the cotangent.
  std::pair<double, double> kernels(std::size_t s, std::size_t t) const;

  std::vector<double> apply_N(const std::vector<double>& g) const;
  std::vector<double> apply_M(const std::vector<double>& g) const;
  /// Both at once (they share one Cauchy sum).
  void apply_NM(const std::vector<double>& g, std::vector<double>* ng, std::vector<double>* mg) const;

 private:
  int m_, n_;
  std::vector<cplx> deta_, d2eta_;  // declared before eta_, which is filled together with them
  std::vector<cplx> eta_, phase_;
  std::vector<double> align_;
  std::vector<double> diag_n_, diag_m_;
  CauchySummator sum_;
  CotangentCorrection cot_;
};

struct NeumannSolution {
  std::vector<double> mu;
  std::vector<double> h;
  SolveReport report;
};

/// Solves (I - N) mu = -M g, then h = (M mu - (I - N) g) / 2.
NeumannSolution solve_neumann(const NeumannSystem& sys, const SolverOptions& options = {});

/// Phi(eta(t)) = eta(t) + (g + h + i mu) / A at every node.
std::vector<cplx> map_boundary(const NeumannSystem& sys, const NeumannSolution& sol);

/// Length and center of each image slit from the boundary values of Phi,
/// using the extrema of the trigonometric interpolant of Re[e^{-i theta} Phi].
SlitImage slit_image_geometry(const std::vector<cplx>& phi, const std::vector<double>& angles, int n);

struct IterationOptions {
  double eps = 1e-13;
  int max_iters = 100;
  int n = 0;  ///< nodes per ellipse; 0 picks 64
  SolverOptions solver;
};

struct IterationResult {
  PreimageState state;
  std::vector<double> defects;  ///< one entry per iteration
  bool converged = false;
};

/// Thrown when the preimage iteration fails; carries the last state.
class IterationFailure : public Error {
 public:
  IterationFailure(ErrorKind kind, const std::string& what, IterationResult last)
      : Error(kind, what), last_(std::move(last)) {}
  const IterationResult& last() const { return last_; }

 private:
  IterationResult last_;
};

/// Fixed-point iteration for ellipses whose image under the normalized slit
/// map is the given slit set. Throws IterationFailure with kind
/// non_convergence or geometry_collision.
IterationResult preimage_iteration(const SlitSet& slits, double r, const IterationOptions& options = {});

struct SlitCapacityOptions {
  double ratio = 0.0;  ///< axis ratio r in (0, 1]; 0 tries 1, 1/2, 1/4, ... down to 1/64
  IterationOptions iteration;
  CapacityOptions capacity;  ///< n = 0 reuses the iteration's n
};

struct SlitCapacityResult {
  CapacityResult capacity;
  double ratio = 0.0;
  int preimage_iterations = 0;
  double defect = 0.0;
  std::vector<double> defects;
  PreimageState state;
};

SlitCapacityResult capacity_of_slits(const SlitSet& slits, const SlitCapacityOptions& options = {});

}  // namespace ancap
