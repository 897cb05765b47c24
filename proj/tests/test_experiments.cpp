#include <cmath>
#include <sstream>

#include "ancap/experiments.hpp"
#include "ancap/reference.hpp"
#include "doctest.h"

using namespace ancap;

TEST_SUITE("experiments") {
  TEST_CASE("table1") {
    const TableResult t = run_table("table1");
    REQUIRE(t.rows.size() == 10);
    for (const auto& row : t.rows) {
      CHECK(row.error.empty());
      CHECK(row.rel_error <= 1e-12);
    }
    CHECK(t.pass());
  }

  TEST_CASE("example36 ring disks") {
    const TableResult t = run_table("example36");
    REQUIRE(t.rows.size() == 4);
    CHECK(t.pass());
    CHECK(t.rows[3].abs_error <= 1e-10);
  }

  TEST_CASE("unknown ids") {
    CHECK_THROWS_AS(run_table("table9"), Error);
    CHECK_THROWS_AS(run_sweep("nine-slits", {0.1, 0.2, 2}), Error);
    CHECK_THROWS_AS(default_grid("nine-slits"), Error);
  }

  TEST_CASE("grids") {
    const auto v = SweepGrid{0.05, 1.0, 20}.values();
    REQUIRE(v.size() == 20);
    CHECK(v.front() == 0.05);
    CHECK(v.back() == doctest::Approx(1.0));
    CHECK(SweepGrid{0.3, 0.9, 1}.values() == std::vector<double>{0.3});
    CHECK_THROWS_AS(SweepGrid({0, 1, 0}).values(), Error);
    CHECK_THROWS_AS(run_sweep("two-slits", {0.01, 1.0, 3}), Error);
  }

  TEST_CASE("two-slit sweep stays between the bounds") {
    const auto recs = run_sweep("two-slits", {0.5, 1.0, 3});
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) {
      CHECK(r.error.empty());
      CHECK(r.within_bounds);
    }
    CHECK(std::abs(recs.back().gamma - 0.5) < 1e-9);
    CHECK(recs[0].gamma < recs[1].gamma);
    CHECK(recs[1].gamma < recs[2].gamma);
  }

  TEST_CASE("disks-3cases stays below the sum of the pieces") {
    ExperimentOptions o;
    o.n = 256;
    const auto recs = run_sweep("disks-3cases", {0.1, 1.0, 2}, o);
    REQUIRE(recs.size() == 6);
    for (const auto& r : recs) {
      CHECK(r.within_bounds);
      CHECK(r.gamma <= 4.0);
    }
    // Case (i) moves every disk and so gains the most.
    CHECK(recs[3].gamma > recs[4].gamma);
    CHECK(recs[4].gamma > recs[5].gamma);
  }

  TEST_CASE("squares-3cases stays between the bounds") {
    ExperimentOptions o;
    o.n = 256;
    const auto recs = run_sweep("squares-3cases", {0.5, 0.5, 1}, o);
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) {
      CHECK(r.error.empty());
      CHECK(r.within_bounds);
    }
  }

  TEST_CASE("ring radius sweep tends to m") {
    ExperimentOptions o;
    o.m = 4;
    o.n = 256;
    const auto recs = run_sweep("ring-disks", {1.5, 20.0, 4}, o);
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].ratio > recs[i - 1].ratio);
    CHECK(recs.back().ratio >= 0.95);
    CHECK(recs.back().ratio < 1.0);
  }

  TEST_CASE("two random disks are strictly subadditive") {
    ExperimentOptions o;
    o.n = 128;
    o.seed = 3;
    const auto recs = run_random_disks(1, 2, o);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].split == 1);
    CHECK(recs[0].error.empty());
    CHECK(recs[0].ratio < 1.0);
  }

  TEST_CASE("placement respects the gap") {
    std::mt19937_64 rng(42);
    const auto disks = place_random_disks(100, rng);
    REQUIRE(disks.size() == 100);
    for (std::size_t i = 0; i < disks.size(); ++i) {
      CHECK(disks[i].radius > 0.2);
      CHECK(disks[i].radius < 0.8);
      for (std::size_t j = 0; j < i; ++j)
        CHECK(std::abs(disks[i].center - disks[j].center) >= disks[i].radius + disks[j].radius + 0.02);
    }
  }

  TEST_CASE("random trials are reproducible and independent of the worker count") {
    ExperimentOptions o;
    o.n = 64;
    o.seed = 17;
    std::ostringstream a, b, c;
    const CsvMeta meta{"random-disks", 17, "--trials 3"};
    write_csv(a, meta, run_random_disks(3, 12, o));
    write_csv(b, meta, run_random_disks(3, 12, o));
    o.jobs = 3;
    write_csv(c, meta, run_random_disks(3, 12, o));
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());
    CHECK(a.str().rfind("# ancap ", 0) == 0);
    o.seed = 18;
    std::ostringstream d;
    write_csv(d, meta, run_random_disks(3, 12, o));
    CHECK(a.str() != d.str());
  }

  TEST_CASE("level set with a far-away disk") {
    LevelSetGrid g;
    g.xmin = 0.0;
    g.xmax = 9.0;
    g.ymin = g.ymax = 0.0;
    g.nx = 2;
    g.ny = 1;
    ExperimentOptions o;
    o.n = 256;
    const LevelSetResult r = run_level_set(1, g, o);
    REQUIRE(r.cells.size() == 2);
    CHECK(r.cells[0].masked);
    CHECK(!r.cells[1].masked);
    CHECK(std::abs(r.cells[1].u - 2.0) < 0.05);
    CHECK(r.cells[1].u >= r.gamma_em);
    CHECK(r.cells[1].u <= r.gamma_em + 1.0 + 1e-9);
  }

  TEST_CASE("level set bounds on a coarse grid") {
    LevelSetGrid g;
    g.nx = g.ny = 5;
    ExperimentOptions o;
    o.n = 128;
    const LevelSetResult r = run_level_set(3, g, o);
    CHECK(std::abs(r.gamma_em - 2.88420404308815) < 1e-8);
    int live = 0;
    for (const auto& c : r.cells) {
      if (c.masked) continue;
      ++live;
      CHECK(c.u >= r.gamma_em - 1e-9);
      CHECK(c.u <= r.gamma_em + 1.0 + 1e-9);
    }
    CHECK(live > 0);
    CHECK_THROWS_AS(run_level_set(5, g, o), Error);
  }

  TEST_CASE("table CSV layout") {
    TableResult t;
    t.id = "demo";
    t.param_names = {"k"};
    TableRow row;
    row.params = {1};
    row.n = 64;
    row.computed = 1.0 / 3.0;
    row.reference = 1.0 / 3.0;
    row.tolerance = 1e-9;
    row.pass = true;
    row.error = "a, b";
    t.rows = {row};
    std::ostringstream os;
    write_csv(os, {"table", 1, "--id demo"}, t);
    std::istringstream in(os.str());
    std::string meta, header, line;
    std::getline(in, meta);
    std::getline(in, header);
    std::getline(in, line);
    CHECK(meta == "# ancap 0.1.0 command=table seed=1 flags=--id demo");
    CHECK(header.rfind("k,n,computed,reference", 0) == 0);
    CHECK(line.find("0.33333333333333331") != std::string::npos);
    CHECK(line.find("\"a, b\"") != std::string::npos);
  }
}
