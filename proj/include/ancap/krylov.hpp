#pragma once

#include <functional>
#include <vector>

#include "ancap/types.hpp"

namespace ancap {

/// How the operator commutes with scalars. A real-linear operator (one that
/// conjugates its argument somewhere) is solved over C^N viewed as R^{2N}.
enum class Linearity { complex_linear, real_linear };

struct LinearOperator {
  std::size_t dim = 0;
  std::function<std::vector<cplx>(const std::vector<cplx>&)> apply;
  Linearity linearity = Linearity::complex_linear;
};

struct GmresOptions {
  double tol = 1e-14;
  int max_iters = 100;
};

struct SolveReport {
  std::vector<cplx> solution;
  int iterations = 0;
  std::vector<double> residual_history;  ///< relative residual estimates, starting with 1
  bool converged = false;
  double true_residual = 0.0;  ///< ||op(x) - rhs|| / ||rhs|| recomputed at the end
};

/// Unrestarted GMRES from a zero initial guess, modified Gram-Schmidt with one
/// reorthogonalization pass. Stops when the relative residual reaches tol.
/// Throws numerical_breakdown on NaN/Inf, invalid_parameter on bad input.
SolveReport gmres(const LinearOperator& op, const std::vector<cplx>& rhs, const GmresOptions& options = {});

}  // namespace ancap
