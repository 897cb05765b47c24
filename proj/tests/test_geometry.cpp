#include <cmath>

#include "ancap/error.hpp"
#include "ancap/geometry.hpp"
#include "ancap/geometry_io.hpp"
#include "doctest.h"

using namespace ancap;

namespace {

// Central differences of z and z' at t.
void check_derivatives(const BoundaryCurve& c, double t) {
  const double h = 1e-5;
  const CurvePoint p = c.evaluate(t), a = c.evaluate(t - h), b = c.evaluate(t + h);
  CHECK(std::abs((b.z - a.z) / (2 * h) - p.dz) < 1e-8);
  CHECK(std::abs((b.dz - a.dz) / (2 * h) - p.d2z) < 1e-7);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::io_error;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("circle parametrization") {
    const BoundaryCurve c = BoundaryCurve::circle(cplx(1, -2), 3.0);
    CHECK(std::abs(c.evaluate(0.0).z - cplx(4, -2)) < 1e-15);
    CHECK(c.orientation() == Orientation::positive);
    CHECK(c.corners().empty());
    check_derivatives(c, 0.7);
    CHECK(c.radius() == 3.0);
  }

  TEST_CASE("ellipse runs clockwise with the given axes") {
    const BoundaryCurve e = BoundaryCurve::ellipse(cplx(1, 1), 2.0, 0.5, 0.25);
    CHECK(e.orientation() == Orientation::negative);
    check_derivatives(e, 1.3);
    // Endpoints of the major axis sit at t = 0 and pi.
    const cplx u = std::polar(1.0, 0.5);
    CHECK(std::abs(e.evaluate(0.0).z - (cplx(1, 1) + u)) < 1e-15);
    CHECK(std::abs(e.evaluate(pi).z - (cplx(1, 1) - u)) < 1e-15);
    // Semi-minor axis 0.5 * a * r.
    CHECK(std::abs(e.evaluate(pi / 2).z - cplx(1, 1)) == doctest::Approx(0.25));
  }

  TEST_CASE("polygon corners and edges") {
    const BoundaryCurve sq = BoundaryCurve::polygon({1.0, imag_unit, -1.0, -imag_unit});
    REQUIRE(sq.corners().size() == 4);
    for (int k = 0; k < 4; ++k) {
      CHECK(sq.corners()[static_cast<std::size_t>(k)] == doctest::Approx(k * pi / 2));
      CHECK(std::abs(sq.evaluate(k * pi / 2).z - sq.vertices()[static_cast<std::size_t>(k)]) < 1e-15);
    }
    // Midpoint of the first edge, with the edge direction as derivative.
    const CurvePoint mid = sq.evaluate(pi / 4);
    CHECK(std::abs(mid.z - cplx(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(mid.dz - (imag_unit - 1.0) / (pi / 2)) < 1e-14);
    CHECK(sq.orientation() == Orientation::positive);
  }

  TEST_CASE("invalid curves") {
    CHECK(kind_of([] { BoundaryCurve::circle(0.0, -1.0); }) == ErrorKind::invalid_geometry);
    CHECK(kind_of([] { BoundaryCurve::ellipse(0.0, 1.0, 0.0, 1.5); }) == ErrorKind::invalid_geometry);
    CHECK(kind_of([] { BoundaryCurve::polygon({0.0, 1.0}); }) == ErrorKind::invalid_geometry);
    CHECK(kind_of([] { BoundaryCurve::polygon({0.0, cplx(1, 1), cplx(1, 0), cplx(0, 1)}); }) ==
          ErrorKind::invalid_geometry);
  }

  TEST_CASE("affine transforms") {
    const BoundaryCurve c = BoundaryCurve::circle(1.0, 2.0).transformed(cplx(0, 3), cplx(5, 0));
    CHECK(c.radius() == doctest::Approx(6.0));
    CHECK(std::abs(c.center() - cplx(5, 3)) < 1e-14);
    const BoundaryCurve e = BoundaryCurve::ellipse(0.0, 1.0, 0.2, 0.5).transformed(std::polar(2.0, 0.3), 0.0);
    CHECK(e.major() == doctest::Approx(2.0));
    CHECK(e.angle() == doctest::Approx(0.5));
  }

  TEST_CASE("segment distance") {
    CHECK(segment_distance(cplx(-1, 0), cplx(1, 0), cplx(0, -1), cplx(0, 1)) == 0.0);
    CHECK(segment_distance(cplx(0, 0), cplx(1, 0), cplx(0, 1), cplx(1, 1)) == doctest::Approx(1.0));
    CHECK(segment_distance(cplx(0, 0), cplx(1, 0), cplx(2, 0), cplx(3, 0)) == doctest::Approx(1.0));
    CHECK(segment_distance(cplx(0, 0), cplx(2, 0), cplx(1, 0.5), cplx(1, 3)) == doctest::Approx(0.5));
  }

  TEST_CASE("slits") {
    const Slit s = slit_from_endpoints(cplx(0, 0), cplx(0, 2));
    CHECK(s.length == doctest::Approx(2.0));
    CHECK(s.angle == doctest::Approx(pi / 2));
    CHECK(std::abs(s.center - cplx(0, 1)) < 1e-15);
    CHECK(kind_of([] { slit_from_endpoints(1.0, 1.0); }) == ErrorKind::invalid_geometry);
    CHECK(kind_of([] {
            SlitSet({slit_from_endpoints(-1.0, 1.0), slit_from_endpoints(cplx(0, -1), cplx(0, 1))});
          }) == ErrorKind::invalid_geometry);
  }

  TEST_CASE("cantor levels") {
    const SlitSet s2 = cantor_slits(2);
    REQUIRE(s2.size() == 4);
    const double ends[4][2] = {{-1, -7.0 / 9}, {-5.0 / 9, -1.0 / 3}, {1.0 / 3, 5.0 / 9}, {7.0 / 9, 1}};
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(s2[j].length == doctest::Approx(2.0 / 9));
      CHECK(std::min(s2[j].a.real(), s2[j].b.real()) == doctest::Approx(ends[j][0]));
      CHECK(std::max(s2[j].a.real(), s2[j].b.real()) == doctest::Approx(ends[j][1]));
    }
    CHECK(cantor_slits(0).size() == 1);
    CHECK(cantor_slits(10).size() == 1024);
    CHECK(kind_of([] { cantor_slits(-1); }) == ErrorKind::invalid_parameter);
    CHECK(kind_of([] { cantor_slits(13); }) == ErrorKind::resource_limit);
  }

  TEST_CASE("disjointness") {
    CHECK_NOTHROW(check_disjoint({BoundaryCurve::circle(-2.0, 1.0), BoundaryCurve::circle(2.0, 1.0)}));
    CHECK_THROWS_AS(check_disjoint({BoundaryCurve::circle(-0.5, 1.0), BoundaryCurve::circle(0.5, 1.0)}), Error);
    // Nested curves are rejected too.
    CHECK_THROWS_AS(check_disjoint({BoundaryCurve::circle(0.0, 3.0), BoundaryCurve::circle(0.0, 1.0)}), Error);
    const BoundaryCurve sq = BoundaryCurve::polygon({cplx(3, 0), cplx(4, 0), cplx(4, 1), cplx(3, 1)});
    CHECK_NOTHROW(check_disjoint({BoundaryCurve::circle(0.0, 1.0), sq}));
    CHECK(sampled_separation(BoundaryCurve::circle(0.0, 1.0), sq) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(sampled_separation(BoundaryCurve::circle(0.0, 3.0), BoundaryCurve::circle(0.0, 1.0)) < 0.0);
  }

  TEST_CASE("labelled subsets") {
    const CompactSetSpec s = CompactSetSpec::jordan(
        {BoundaryCurve::circle(-2.0, 1.0), BoundaryCurve::circle(2.0, 1.0), BoundaryCurve::circle(6.0, 1.0)},
        {"E", "F", "E"});
    CHECK(s.subset("E").size() == 2);
    CHECK(s.subset("F").size() == 1);
    CHECK_THROWS_AS(s.subset("G"), Error);
    CHECK_THROWS_AS(s.slits(), Error);
  }
}

TEST_SUITE("geometry_io") {
  TEST_CASE("parse curves") {
    const CompactSetSpec s = parse_geometry(R"({"components": [
      {"type": "circle", "center": [1, 2], "radius": 0.5, "label": "E"},
      {"type": "ellipse", "center": [5, 0], "major": 2, "angle": 0.3, "ratio": 0.5, "label": "F"},
      {"type": "polygon", "vertices": [[10, 0], [11, 0], [11, 1]], "label": "F"}]})");
    REQUIRE(s.size() == 3);
    CHECK(!s.is_slit());
    CHECK(s.curves()[0].kind() == BoundaryCurve::Kind::circle);
    CHECK(s.curves()[1].kind() == BoundaryCurve::Kind::ellipse);
    CHECK(s.curves()[2].corners().size() == 3);
    CHECK(s.subset("F").size() == 2);
  }

  TEST_CASE("parse slits") {
    const CompactSetSpec s = parse_geometry(R"({"components": [
      {"type": "slit", "a": [0, 0], "b": [1, 0]}, {"type": "slit", "a": [2, 0], "b": [2, 1]}]})");
    CHECK(s.is_slit());
    CHECK(s.slits().size() == 2);
    CHECK(s.labels().empty());
  }

  TEST_CASE("malformed input") {
    CHECK(kind_of([] { parse_geometry("{"); }) == ErrorKind::io_error);
    CHECK(kind_of([] { parse_geometry(R"({"shapes": []})"); }) == ErrorKind::io_error);
    CHECK(kind_of([] { parse_geometry(R"({"components": [{"type": "torus"}]})"); }) == ErrorKind::io_error);
    CHECK(kind_of([] { parse_geometry(R"({"components": [{"type": "circle", "center": [0, 0]}]})"); }) ==
          ErrorKind::io_error);
    CHECK(kind_of([] { load_geometry("/nonexistent/geometry.json"); }) == ErrorKind::io_error);
  }

  TEST_CASE("invalid geometry") {
    CHECK(kind_of([] {
            parse_geometry(R"({"components": [{"type": "circle", "center": [0, 0], "radius": 1},
                                              {"type": "slit", "a": [2, 0], "b": [3, 0]}]})");
          }) == ErrorKind::invalid_geometry);
    CHECK(kind_of([] { parse_geometry(R"({"components": []})"); }) == ErrorKind::invalid_geometry);
    CHECK(kind_of([] {
            parse_geometry(R"({"components": [{"type": "circle", "center": [0, 0], "radius": -1}]})");
          }) == ErrorKind::invalid_geometry);
  }
}
