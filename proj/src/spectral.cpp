#include "ancap/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "ancap/error.hpp"

namespace ancap {

namespace {

// FFTW plan creation is not thread-safe; plans are made once per size under a
// lock and then executed through the thread-safe new-array interface.
struct Plans {
  fftw_plan forward;
  fftw_plan backward;
};

const Plans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  std::vector<double> r(static_cast<std::size_t>(n));
  std::vector<fftw_complex> c(static_cast<std::size_t>(n / 2 + 1));
  auto p = std::make_unique<Plans>();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p->forward = fftw_plan_dft_r2c_1d(n, r.data(), c.data(), flags);
  p->backward = fftw_plan_dft_c2r_1d(n, c.data(), r.data(), flags);
  if (p->forward == nullptr || p->backward == nullptr) throw Error(ErrorKind::numerical_breakdown, "FFT planning failed");
  return *cache.emplace(n, std::move(p)).first->second;
}

std::vector<cplx> forward(const double* g, int n) {
  const Plans& p = plans_for(n);
  std::vector<double> in(g, g + n);
  std::vector<cplx> out(static_cast<std::size_t>(n / 2 + 1));
  fftw_execute_dft_r2c(p.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> backward(std::vector<cplx> spec, int n) {
  const Plans& p = plans_for(n);
  std::vector<double> out(static_cast<std::size_t>(n));
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  for (double& x : out) x /= n;
  return out;
}

void check_size(int n) {
  if (n < 4 || n % 2 != 0) throw Error(ErrorKind::invalid_parameter, "spectral grid size must be even and >= 4");
}

}  // namespace

CotangentCorrection::CotangentCorrection(int n) : n_(n) {
  check_size(n);
  // Column of the trapezoidal cotangent sum; it is odd, so its transform is
  // purely imaginary.
  std::vector<double> column(static_cast<std::size_t>(n), 0.0);
  for (int d = 1; d < n; ++d) column[static_cast<std::size_t>(d)] = -std::cos(pi * d / n) / std::sin(pi * d / n) / n;
  const auto c = forward(column.data(), n);
  multiplier_.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double conj_part = (k == 0 || static_cast<int>(k) == n / 2) ? 0.0 : 1.0;
    multiplier_[k] = conj_part - c[k].imag();
  }
}

void CotangentCorrection::add_to(const double* g, double* out) const {
  auto spec = forward(g, n_);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= cplx(0.0, multiplier_[k]);
  const auto r = backward(std::move(spec), n_);
  for (int i = 0; i < n_; ++i) out[i] += r[static_cast<std::size_t>(i)];
}

std::vector<double> conjugate_function(const std::vector<double>& g) {
  const int n = static_cast<int>(g.size());
  check_size(n);
  auto spec = forward(g.data(), n);
  for (std::size_t k = 0; k < spec.size(); ++k)
    spec[k] *= (k == 0 || static_cast<int>(k) == n / 2) ? cplx{} : imag_unit;
  return backward(std::move(spec), n);
}

TrigInterpolant::TrigInterpolant(const std::vector<double>& samples)
    : n_(static_cast<int>(samples.size())), samples_(samples) {
  check_size(n_);
  coef_ = forward(samples.data(), n_);
  for (std::size_t k = 0; k < coef_.size(); ++k) {
    // Interior modes appear twice (k and -k); the Nyquist mode once, as a cosine.
    const bool single = k == 0 || static_cast<int>(k) == n_ / 2;
    coef_[k] *= (single ? 1.0 : 2.0) / n_;
  }
  coef_[static_cast<std::size_t>(n_ / 2)] = coef_[static_cast<std::size_t>(n_ / 2)].real();
}

void TrigInterpolant::evaluate(double t, double& value, double& d1, double& d2) const {
  value = coef_[0].real();
  d1 = 0.0;
  d2 = 0.0;
  const cplx step = std::polar(1.0, t);
  cplx e = 1.0;
  for (std::size_t k = 1; k < coef_.size(); ++k) {
    e *= step;
    if (k % 64 == 0) e = std::polar(1.0, static_cast<double>(k) * t);
    const cplx term = coef_[k] * e;
    const double kk = static_cast<double>(k);
    value += term.real();
    d1 -= kk * term.imag();
    d2 -= kk * kk * term.real();
  }
}

double TrigInterpolant::operator()(double t) const {
  double v, a, b;
  evaluate(t, v, a, b);
  return v;
}

std::pair<double, double> TrigInterpolant::extrema() const {
  const auto [lo_it, hi_it] = std::minmax_element(samples_.begin(), samples_.end());
  const double h = two_pi / n_;
  auto refine = [&](std::size_t index, double sign) {
    const double t0 = h * static_cast<double>(index);
    double best = samples_[index];
    double t = t0;
    for (int it = 0; it < 40; ++it) {
      double v, d1, d2;
      evaluate(t, v, d1, d2);
      if (sign * v > sign * best) best = v;
      // Newton on the derivative only while curvature points the right way.
      if (!(sign * d2 < 0.0)) break;
      double dt = -d1 / d2;
      dt = std::clamp(dt, -h, h);
      const double tn = std::clamp(t + dt, t0 - h, t0 + h);
      if (std::abs(tn - t) < 1e-15) break;
      t = tn;
    }
    double v, d1, d2;
    evaluate(t, v, d1, d2);
    if (sign * v > sign * best) best = v;
    return best;
  };
  const double lo = refine(static_cast<std::size_t>(lo_it - samples_.begin()), -1.0);
  const double hi = refine(static_cast<std::size_t>(hi_it - samples_.begin()), 1.0);
  return {lo, hi};
}

}  // namespace ancap
