#pragma once

#include <utility>
#include <vector>

#include "ancap/types.hpp"

namespace ancap {

/// Discrete conjugation on an n-point periodic grid with the trapezoidal
/// cotangent sum removed:
///   out = K g - sum_{j != q} (-(1/n) cot((s_q - s_j)/2)) g_j,
/// where K maps e^{ikt} to i sign(k) e^{ikt} (zero for k = 0 and k = n/2).
/// This is the correction that turns a trapezoidal sum over a kernel with a
/// -(1/2pi) cot((s-t)/2) singularity into its principal value.
class CotangentCorrection {
 public:
  explicit CotangentCorrection(int n);
  int size() const { return n_; }
  /// Applies the correction to g[0..n) and adds the result to out[0..n).
  void add_to(const double* g, double* out) const;

 private:
  int n_;
  std::vector<double> multiplier_;  // imaginary multiplier per r2c bin
};

/// Plain discrete conjugation K (no cotangent correction).
std::vector<double> conjugate_function(const std::vector<double>& g);

/// Trigonometric interpolant of equispaced samples u(2*pi*q/n).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const std::vector<double>& samples);
  /// Value and first two derivatives at t.
  void evaluate(double t, double& value, double& d1, double& d2) const;
  double operator()(double t) const;

  /// Minimum and maximum of the interpolant, refined by safeguarded Newton
  /// steps from the extreme samples.
  std::pair<double, double> extrema() const;

 private:
  int n_;
  std::vector<double> samples_;
  std::vector<cplx> coef_;  // c_k for k = 0..n/2, interpolant = sum over |k| <= n/2
};

}  // namespace ancap
