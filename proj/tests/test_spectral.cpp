#include <cmath>
#include <random>

#include "ancap/spectral.hpp"
#include "doctest.h"

using namespace ancap;

TEST_SUITE("spectral") {
  TEST_CASE("conjugation maps cos kt to -sin kt") {
    const int n = 32;
    for (int k : {1, 3, 15}) {
      std::vector<double> g(n);
      for (int q = 0; q < n; ++q) g[static_cast<std::size_t>(q)] = std::cos(k * two_pi * q / n) + 2.0;
      const auto h = conjugate_function(g);
      for (int q = 0; q < n; ++q) CHECK(std::abs(h[static_cast<std::size_t>(q)] + std::sin(k * two_pi * q / n)) < 1e-13);
    }
  }

  TEST_CASE("cotangent correction completes the trapezoidal sum") {
    const int n = 64;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss;
    std::vector<double> g(n);
    for (auto& x : g) x = gauss(rng);
    std::vector<double> out(n, 0.0);
    CotangentCorrection(n).add_to(g.data(), out.data());
    const auto k = conjugate_function(g);
    for (int q = 0; q < n; ++q) {
      double cot_sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != q) cot_sum -= std::cos(pi * (q - j) / n) / std::sin(pi * (q - j) / n) / n * g[static_cast<std::size_t>(j)];
      CHECK(out[static_cast<std::size_t>(q)] + cot_sum == doctest::Approx(k[static_cast<std::size_t>(q)]).epsilon(1e-12));
    }
  }

  TEST_CASE("trigonometric interpolation reproduces trig polynomials") {
    const int n = 16;
    auto f = [](double t) { return 0.5 + std::cos(t - 0.3) + 0.25 * std::sin(3 * t) + 0.1 * std::cos(8 * t); };
    std::vector<double> s(n);
    for (int q = 0; q < n; ++q) s[static_cast<std::size_t>(q)] = f(two_pi * q / n);
    const TrigInterpolant p(s);
    for (double t : {0.1, 1.7, 4.4}) {
      double v, d1, d2;
      p.evaluate(t, v, d1, d2);
      CHECK(v == doctest::Approx(f(t)).epsilon(1e-13));
      const double h = 1e-5;
      CHECK(d1 == doctest::Approx((f(t + h) - f(t - h)) / (2 * h)).epsilon(1e-7));
    }
  }

  TEST_CASE("extrema between the samples") {
    const int n = 12;
    std::vector<double> s(n);
    // Extremes at t = 0.2 and 0.2 + pi, neither of them a node.
    for (int q = 0; q < n; ++q) s[static_cast<std::size_t>(q)] = 2.0 * std::cos(two_pi * q / n - 0.2);
    const auto [lo, hi] = TrigInterpolant(s).extrema();
    CHECK(lo == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(hi == doctest::Approx(2.0).epsilon(1e-14));
  }
}
