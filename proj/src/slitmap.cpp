#include "ancap/slitmap.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ancap {

namespace {

std::vector<cplx> ellipse_points(const PreimageState& s, int n, std::vector<cplx>& d1, std::vector<cplx>& d2) {
  const auto curves = s.curves();
  std::vector<cplx> z;
  z.reserve(curves.size() * static_cast<std::size_t>(n));
  d1.clear();
  d2.clear();
  for (const auto& c : curves)
    for (int q = 0; q < n; ++q) {
      const CurvePoint p = c.evaluate(two_pi * q / n);
      z.push_back(p.z);
      d1.push_back(p.dz);
      d2.push_back(p.d2z);
    }
  return z;
}

}  // namespace

std::vector<BoundaryCurve> PreimageState::curves() const {
  std::vector<BoundaryCurve> out;
  out.reserve(centers.size());
  for (std::size_t j = 0; j < centers.size(); ++j)
    out.push_back(BoundaryCurve::ellipse(centers[j], majors[j], angles[j], ratio));
  return out;
}

// ---------------------------------------------------------------------------
// NeumannSystem

NeumannSystem::NeumannSystem(const PreimageState& state, int n, const FastSumOptions& fastsum)
    : m_(static_cast<int>(state.size())),
      n_(n),
      eta_(ellipse_points(state, n, deta_, d2eta_)),
      sum_(eta_, fastsum),
      cot_(n) {
  const std::size_t total = eta_.size();
  phase_.resize(total);
  align_.resize(total);
  diag_n_.resize(total);
  diag_m_.resize(total);
  for (int j = 0; j < m_; ++j) {
    const double theta = state.angles[static_cast<std::size_t>(j)];
    const cplx a = std::polar(1.0, pi / 2 - theta);
    const cplx rot = std::polar(1.0, -theta);
    for (int q = 0; q < n_; ++q) {
      const std::size_t i = static_cast<std::size_t>(j) * n_ + q;
      phase_[i] = a;
      align_[i] = (rot * eta_[i]).imag();
      const cplx ratio = d2eta_[i] / deta_[i];
      diag_n_[i] = ratio.imag() / two_pi;
      diag_m_[i] = ratio.real() / two_pi;
    }
  }
}

std::pair<double, double> NeumannSystem::kernels(std::size_t s, std::size_t t) const {
  if (s >= eta_.size() || t >= eta_.size()) throw Error(ErrorKind::invalid_parameter, "node index out of range");
  if (s == t) return {diag_n_[s], diag_m_[s]};
  const cplx d = eta_[t] - eta_[s];
  if (d == cplx{}) throw Error(ErrorKind::degenerate_geometry, "distinct nodes share a boundary point");
  const cplx k = phase_[s] / phase_[t] * deta_[t] / d / pi;
  return {k.imag(), k.real()};
}

void NeumannSystem::apply_NM(const std::vector<double>& g, std::vector<double>* ng, std::vector<double>* mg) const {
  const std::size_t total = eta_.size();
  if (g.size() != total) throw Error(ErrorKind::invalid_parameter, "vector length does not match the system");
  std::vector<cplx> q(total);
  for (std::size_t i = 0; i < total; ++i) q[i] = deta_[i] * g[i] / phase_[i];
  const std::vector<cplx> b = sum_.apply(q);
  const double w = two_pi / n_;
  if (ng) {
    ng->resize(total);
    for (std::size_t i = 0; i < total; ++i) (*ng)[i] = (-2.0 / n_ * phase_[i] * b[i]).imag() + w * diag_n_[i] * g[i];
  }
  if (mg) {
    mg->resize(total);
    for (std::size_t i = 0; i < total; ++i) (*mg)[i] = (-2.0 / n_ * phase_[i] * b[i]).real() + w * diag_m_[i] * g[i];
    for (int j = 0; j < m_; ++j) {
      const std::size_t off = static_cast<std::size_t>(j) * n_;
      cot_.add_to(g.data() + off, mg->data() + off);
    }
  }
}

std::vector<double> NeumannSystem::apply_N(const std::vector<double>& g) const {
  std::vector<double> out;
  apply_NM(g, &out, nullptr);
  return out;
}

std::vector<double> NeumannSystem::apply_M(const std::vector<double>& g) const {
  std::vector<double> out;
  apply_NM(g, nullptr, &out);
  return out;
}

NeumannSolution solve_neumann(const NeumannSystem& sys, const SolverOptions& options) {
  const std::size_t total = sys.align().size();
  LinearOperator op;
  op.dim = total;
  op.linearity = Linearity::real_linear;
  op.apply = [&sys, total](const std::vector<cplx>& x) {
    std::vector<double> xr(total);
    for (std::size_t i = 0; i < total; ++i) xr[i] = x[i].real();
    const std::vector<double> nx = sys.apply_N(xr);
    std::vector<cplx> out(total);
    for (std::size_t i = 0; i < total; ++i) out[i] = xr[i] - nx[i];
    return out;
  };
  const std::vector<double>& g = sys.align();
  std::vector<double> ng, mg;
  sys.apply_NM(g, &ng, &mg);
  std::vector<cplx> rhs(total);
  for (std::size_t i = 0; i < total; ++i) rhs[i] = -mg[i];
  SolveReport rep = gmres(op, rhs, options.gmres);
  if (!rep.converged) {
    std::ostringstream os;
    os << "Neumann-kernel GMRES stopped after " << rep.iterations << " iterations at relative residual "
       << rep.residual_history.back();
    throw SolverFailure(os.str(), std::move(rep));
  }
  NeumannSolution sol;
  sol.mu.resize(total);
  for (std::size_t i = 0; i < total; ++i) sol.mu[i] = rep.solution[i].real();
  const std::vector<double> mmu = sys.apply_M(sol.mu);
  sol.h.resize(total);
  for (std::size_t i = 0; i < total; ++i) sol.h[i] = 0.5 * (mmu[i] - (g[i] - ng[i]));
  sol.report = std::move(rep);
  return sol;
}

std::vector<cplx> map_boundary(const NeumannSystem& sys, const NeumannSolution& sol) {
  const std::size_t total = sys.eta().size();
  if (sol.mu.size() != total || sol.h.size() != total)
    throw Error(ErrorKind::invalid_parameter, "solution does not match the system");
  std::vector<cplx> phi(total);
  for (std::size_t i = 0; i < total; ++i)
    phi[i] = sys.eta()[i] + cplx(sys.align()[i] + sol.h[i], sol.mu[i]) / sys.phase()[i];
  return phi;
}

SlitImage slit_image_geometry(const std::vector<cplx>& phi, const std::vector<double>& angles, int n) {
  if (n <= 0 || angles.empty() || phi.size() != angles.size() * static_cast<std::size_t>(n))
    throw Error(ErrorKind::invalid_parameter, "boundary values do not match the slit count");
  SlitImage img;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const cplx rot = std::polar(1.0, -angles[j]);
    std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      const cplx w = rot * phi[j * static_cast<std::size_t>(n) + static_cast<std::size_t>(q)];
      u[static_cast<std::size_t>(q)] = w.real();
      v[static_cast<std::size_t>(q)] = w.imag();
    }
    const auto [lo, hi] = TrigInterpolant(u).extrema();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double flat = 0.0;
    for (double x : v) flat = std::max(flat, std::abs(x - mean));
    img.lengths.push_back(hi - lo);
    img.centers.push_back(std::polar(1.0, angles[j]) * cplx(0.5 * (hi + lo), mean));
    img.flatness.push_back(flat);
  }
  return img;
}

// ---------------------------------------------------------------------------
// Preimage iteration

IterationResult preimage_iteration(const SlitSet& slits, double r, const IterationOptions& options) {
  if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::invalid_parameter, "axis ratio r must lie in (0, 1]");
  if (!(options.eps > 0.0)) throw Error(ErrorKind::invalid_parameter, "iteration tolerance must be positive");
  if (options.max_iters < 1) throw Error(ErrorKind::invalid_parameter, "max_iters must be at least 1");
  const int n = options.n > 0 ? options.n : 64;
  const std::size_t m = slits.size();

  IterationResult res;
  PreimageState& st = res.state;
  st.ratio = r;
  for (const Slit& s : slits.slits()) {
    st.centers.push_back(s.center);
    st.majors.push_back((1.0 - 0.5 * r) * s.length);
    st.angles.push_back(s.angle);
  }

  for (int it = 1;; ++it) {
    st.iteration = it;
    const NeumannSystem sys(st, n, options.solver.fastsum);
    const NeumannSolution sol = solve_neumann(sys, options.solver);
    const SlitImage img = slit_image_geometry(map_boundary(sys, sol), st.angles, n);
    double defect = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      defect += std::abs(img.centers[j] - slits[j].center) + std::abs(img.lengths[j] - slits[j].length);
    defect /= 2.0 * static_cast<double>(m);
    res.defects.push_back(defect);

    if (!std::isfinite(defect))
      throw IterationFailure(ErrorKind::non_convergence, "preimage iteration produced a non-finite defect", res);
    if (defect < options.eps) {
      res.converged = true;
      return res;
    }
    if (it >= options.max_iters) {
      std::ostringstream os;
      os << "preimage iteration did not reach " << options.eps << " in " << options.max_iters
         << " iterations (defect " << defect << "); try a smaller r";
      throw IterationFailure(ErrorKind::non_convergence, os.str(), res);
    }
    if (it > 3 && defect > 100.0 * res.defects.front())
      throw IterationFailure(ErrorKind::non_convergence, "preimage iteration is diverging; try a smaller r", res);

    for (std::size_t j = 0; j < m; ++j) {
      st.centers[j] -= img.centers[j] - slits[j].center;
      st.majors[j] -= (1.0 - 0.5 * r) * (img.lengths[j] - slits[j].length);
      if (!(st.majors[j] > 0.0))
        throw IterationFailure(ErrorKind::geometry_collision, "an ellipse collapsed; try a smaller r", res);
    }
    try {
      check_disjoint(st.curves(), 0.0);
    } catch (const Error&) {
      throw IterationFailure(ErrorKind::geometry_collision, "preimage ellipses overlap; try a smaller r", res);
    }
  }
}

SlitCapacityResult capacity_of_slits(const SlitSet& slits, const SlitCapacityOptions& options) {
  std::vector<double> ratios;
  if (options.ratio > 0.0) {
    if (options.ratio > 1.0) throw Error(ErrorKind::invalid_parameter, "axis ratio r must lie in (0, 1]");
    ratios = {options.ratio};
  } else {
    for (double r = 1.0; r >= 1.0 / 64; r *= 0.5) ratios.push_back(r);
  }
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    const double r = ratios[k];
    IterationOptions it = options.iteration;
    // Thin ellipses need proportionally more nodes.
    if (it.n <= 0) it.n = 2 * static_cast<int>(std::ceil(32.0 / r));
    try {
      IterationResult ir = preimage_iteration(slits, r, it);
      CapacityOptions co = options.capacity;
      if (co.n <= 0) co.n = it.n;
      SlitCapacityResult out;
      out.capacity = compute_capacity(ir.state.curves(), co);
      out.capacity.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.ratio = r;
      out.preimage_iterations = ir.state.iteration;
      out.defect = ir.defects.back();
      out.defects = std::move(ir.defects);
      out.state = std::move(ir.state);
      return out;
    } catch (const IterationFailure&) {
      if (k + 1 == ratios.size()) throw;
    } catch (const SolverFailure&) {
      if (k + 1 == ratios.size()) throw;
    }
  }
  throw Error(ErrorKind::non_convergence, "no axis ratio produced a preimage domain");
}

}  // namespace ancap
