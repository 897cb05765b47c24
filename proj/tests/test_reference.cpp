#include <cmath>

#include "ancap/error.hpp"
#include "ancap/reference.hpp"
#include "doctest.h"

using namespace ancap;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_SUITE("reference") {
  TEST_CASE("theta2 against high-precision values") {
    // 30-digit evaluations of the series definition.
    CHECK(rel(jacobi_theta2(0.3), 1.6144603411944334908) < 1e-14);
    CHECK(rel(jacobi_theta2(0.9), 5.4605450270606180428) < 5e-14);
    CHECK(jacobi_theta2(0.0) == 0.0);
  }

  TEST_CASE("theta2 rejects q outside [0, 1)") {
    CHECK_THROWS_AS(jacobi_theta2(1.0), Error);
    CHECK_THROWS_AS(jacobi_theta2(-0.1), Error);
    try {
      jacobi_theta2(1.5);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domain_error);
    }
  }

  TEST_CASE("two disks on the full grid") {
    struct Cell {
      double r, c, value;
    };
    // Independent 30-digit evaluation of the theta-function formula.
    const Cell cells[] = {
        {0.1, 0.5, 0.19800020614284422814}, {0.1, 1, 0.19950000314857491605}, {0.1, 2, 0.1998750000489198225},
        {0.1, 3, 0.1999444444487347242},    {0.5, 1, 0.93779750954855986369}, {0.5, 2, 0.98437900023922312202},
        {0.5, 3, 0.99305589754521471376},   {1, 2, 1.8755950190971197274},    {1, 3, 1.9444911285954482646},
        {2, 3, 3.5634680878884730402},
    };
    for (const Cell& cell : cells) {
      CAPTURE(cell.r);
      CAPTURE(cell.c);
      CHECK(rel(exact_two_disks(cell.c, cell.r).value, cell.value) < 1e-14);
    }
  }

  TEST_CASE("two disks headline value") {
    const ExactValue v = exact_two_disks(2.0, 1.0);
    CHECK(std::abs(v.value - 1.8755950190971197) < 5e-15);
    CHECK(!v.formula.empty());
    CHECK_THROWS_AS(exact_two_disks(1.0, 1.0), Error);
  }

  TEST_CASE("far-apart disks approach the sum of radii") {
    CHECK(exact_two_disks(1e4, 1.0).value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(exact_two_disks(1e4, 1.0).value < 2.0);
  }

  TEST_CASE("gamma(1/4) constant") {
    CHECK(rel(gamma_quarter, std::tgamma(0.25)) < 4e-16);
  }

  TEST_CASE("square values") {
    CHECK(rel(exact_square(std::sqrt(2.0)).value, 0.834626841674073) < 1e-14);
    CHECK(rel(exact_square(2.0).value, 1.1803405990161) < 1e-13);
    CHECK(exact_square(4.0).value == doctest::Approx(2.0 * exact_square(2.0).value).epsilon(1e-15));
    CHECK_THROWS_AS(exact_square(-1.0), Error);
  }

  TEST_CASE("segments, intervals and disks") {
    CHECK(exact_segment(cplx(0.1, 0), cplx(1.1, 0)).value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(exact_segment(cplx(0, 0), cplx(3, 4)).value == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(exact_real_union({{-1.1, -0.1}, {0.1, 1.1}}).value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(exact_real_union({{0.0, 2.0}, {1.0, 3.0}}), Error);
    CHECK_THROWS_AS(exact_real_union({}), Error);
    CHECK(exact_disk(7.0).value == 7.0);
    CHECK_THROWS_AS(exact_disk(0.0), Error);
  }
}
