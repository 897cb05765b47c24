#include "ancap/krylov.hpp"

#include <cmath>

#include "ancap/error.hpp"

namespace ancap {

namespace {

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (cplx x : v) s += std::norm(x);
  return std::sqrt(s);
}

// Coefficient field F is cplx for complex-linear operators and double for
// real-linear ones; the only difference is the inner product.
template <typename F>
F inner(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  cplx s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  if constexpr (std::is_same_v<F, double>)
    return s.real();
  else
    return s;
}

template <typename F>
F conj_of(F x) {
  if constexpr (std::is_same_v<F, double>)
    return x;
  else
    return std::conj(x);
}

template <typename F>
SolveReport run(const LinearOperator& op, const std::vector<cplx>& rhs, const GmresOptions& o) {
  const std::size_t n = rhs.size();
  SolveReport rep;
  rep.solution.assign(n, cplx{});
  const double beta = norm2(rhs);
  if (!std::isfinite(beta)) throw Error(ErrorKind::numerical_breakdown, "right-hand side is not finite");
  if (beta == 0.0) {
    rep.converged = true;
    rep.residual_history = {0.0};
    return rep;
  }
  const auto m = static_cast<std::size_t>(o.max_iters);
  std::vector<std::vector<cplx>> V;
  V.reserve(m + 1);
  V.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i) V[0][i] = rhs[i] / beta;
  std::vector<std::vector<F>> H(m + 1, std::vector<F>(m, F{}));  // H[row][col]
  std::vector<double> cs(m);
  std::vector<F> sn(m);
  std::vector<F> g(m + 1, F{});
  g[0] = beta;
  rep.residual_history.push_back(1.0);

  std::size_t k = 0;
  bool done = false;
  while (k < m && !done) {
    std::vector<cplx> w = op.apply(V[k]);
    if (w.size() != n) throw Error(ErrorKind::invalid_parameter, "operator returned a vector of the wrong size");
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i <= k; ++i) {
        const F h = inner<F>(V[i], w);
        H[i][k] += h;
        for (std::size_t r = 0; r < n; ++r) w[r] -= h * V[i][r];
      }
    }
    const double hn = norm2(w);
    if (!std::isfinite(hn)) throw Error(ErrorKind::numerical_breakdown, "non-finite value in GMRES iteration");
    H[k + 1][k] = hn;

    for (std::size_t i = 0; i < k; ++i) {
      const F x = H[i][k], y = H[i + 1][k];
      H[i][k] = cs[i] * x + sn[i] * y;
      H[i + 1][k] = -conj_of(sn[i]) * x + cs[i] * y;
    }
    const F a = H[k][k];
    const double r = std::hypot(std::abs(a), hn);
    if (std::abs(a) == 0.0) {
      cs[k] = 0.0;
      sn[k] = F{1.0};
    } else {
      cs[k] = std::abs(a) / r;
      sn[k] = (a / std::abs(a)) * hn / r;
    }
    H[k][k] = cs[k] * a + sn[k] * hn;
    H[k + 1][k] = F{};
    g[k + 1] = -conj_of(sn[k]) * g[k];
    g[k] = cs[k] * g[k];
    const double res = std::abs(g[k + 1]) / beta;
    rep.residual_history.push_back(res);
    ++k;
    if (res <= o.tol || hn == 0.0) {
      done = true;
    } else {
      V.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) V[k][i] = w[i] / hn;
    }
  }

  std::vector<F> y(k);
  for (std::size_t i = k; i-- > 0;) {
    F s = g[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
    y[i] = s / H[i][i];
  }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) rep.solution[i] += y[j] * V[j][i];
  for (cplx x : rep.solution)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw Error(ErrorKind::numerical_breakdown, "non-finite GMRES solution");

  rep.iterations = static_cast<int>(k);
  rep.converged = done;
  std::vector<cplx> ax = op.apply(rep.solution);
  for (std::size_t i = 0; i < n; ++i) ax[i] -= rhs[i];
  rep.true_residual = norm2(ax) / beta;
  return rep;
}

}  // namespace

SolveReport gmres(const LinearOperator& op, const std::vector<cplx>& rhs, const GmresOptions& options) {
  if (!op.apply) throw Error(ErrorKind::invalid_parameter, "operator has no apply function");
  if (op.dim != rhs.size()) throw Error(ErrorKind::invalid_parameter, "rhs length does not match operator dimension");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "GMRES tol must be positive");
  if (options.max_iters < 1) throw Error(ErrorKind::invalid_parameter, "GMRES max_iters must be at least 1");
  if (op.linearity == Linearity::real_linear) return run<double>(op, rhs, options);
  return run<cplx>(op, rhs, options);
}

}  // namespace ancap
