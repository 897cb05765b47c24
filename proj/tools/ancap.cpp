// ancap: analytic capacity of compact planar sets.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ancap/experiments.hpp"
#include "ancap/geometry_io.hpp"
#include "ancap/reference.hpp"
#include "ancap/slitmap.hpp"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct SolverFlags {
  std::string fast_sum = "auto";
  double fmm_tol = 0.5e-15;
  double gmres_tol = 1e-14;
  int gmres_maxit = 100;
  int grading_p = 3;

  void add(CLI::App* app) {
    app->add_option("--fast-sum", fast_sum, "Cauchy sum method")
        ->check(CLI::IsMember({"dense", "tree", "auto"}))
        ->capture_default_str();
    app->add_option("--fmm-tol", fmm_tol, "fast-sum tolerance")->check(CLI::Range(1e-16, 1e-6))->capture_default_str();
    app->add_option("--gmres-tol", gmres_tol, "GMRES relative residual tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--gmres-maxit", gmres_maxit, "GMRES iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--grading-p", grading_p, "corner grading order")->check(CLI::Range(2, 20))->capture_default_str();
  }

  ancap::SolverOptions solver() const {
    ancap::SolverOptions s;
    s.fastsum.method = fast_sum == "dense"  ? ancap::SumMethod::dense
                       : fast_sum == "tree" ? ancap::SumMethod::tree
                                            : ancap::SumMethod::automatic;
    s.fastsum.tol = fmm_tol;
    s.gmres.tol = gmres_tol;
    s.gmres.max_iters = gmres_maxit;
    return s;
  }

  ancap::GradingOptions grading() const {
    ancap::GradingOptions g;
    g.p = grading_p;
    return g;
  }
};

// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ancap::Error(ancap::ErrorKind::io_error, "cannot write '" + path + "'");
  write(f);
  if (!f) throw ancap::Error(ancap::ErrorKind::io_error, "error writing '" + path + "'");
}

// Command line minus the output path and worker count, for CSV metadata.
std::string flag_string(int argc, char** argv) {
  std::string s;
  for (int i = 2; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" || a == "--jobs" || a == "--trace") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--jobs=", 0) == 0 || a.rfind("--trace=", 0) == 0) continue;
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

json capacity_json(const ancap::CapacityResult& r) {
  return {{"gamma", r.gamma}, {"n", r.n}, {"iterations", r.iterations}, {"residual", r.residual},
          {"seconds", r.seconds}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic capacity of compact planar sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ancap::version);

  std::function<int()> action;
  std::string out;
  int n = 0;
  int jobs = 1;
  bool timings = false;
  SolverFlags sf;

  // capacity
  auto* cap = app.add_subcommand("capacity", "capacity of a set bounded by Jordan curves");
  std::string geometry;
  cap->add_option("--geometry", geometry, "geometry JSON file")->required();
  cap->add_option("--n", n, "nodes per component (default 512, times the corner count)")->check(CLI::NonNegativeNumber);
  cap->add_option("--out", out, "output JSON file (default stdout)");
  sf.add(cap);
  cap->callback([&] {
    action = [&] {
      const ancap::CompactSetSpec spec = ancap::load_geometry(geometry);
      if (spec.is_slit())
        throw ancap::Error(ancap::ErrorKind::invalid_geometry, "slit geometries need the slit-capacity command");
      ancap::CapacityOptions co;
      co.n = n;
      co.grading = sf.grading();
      co.solver = sf.solver();
      const json j = capacity_json(ancap::compute_capacity(spec, co));
      emit(out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return 0;
    };
  });

  // slit-capacity
  auto* slit = app.add_subcommand("slit-capacity", "capacity of a union of rectilinear slits");
  std::string ratio = "auto", trace;
  double eps = 1e-13;
  int max_iter = 100;
  slit->add_option("--geometry", geometry, "geometry JSON file with slit components")->required();
  slit->add_option("--n", n, "nodes per preimage ellipse (default 64/r)")->check(CLI::NonNegativeNumber);
  slit->add_option("--ratio", ratio, "ellipse axis ratio r in (0, 1], or auto")->capture_default_str();
  slit->add_option("--eps", eps, "preimage iteration tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  slit->add_option("--max-iter", max_iter, "preimage iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
  slit->add_option("--trace", trace, "CSV file for the per-iteration defects");
  slit->add_option("--out", out, "output JSON file (default stdout)");
  sf.add(slit);
  slit->callback([&] {
    action = [&] {
      const ancap::CompactSetSpec spec = ancap::load_geometry(geometry);
      if (!spec.is_slit())
        throw ancap::Error(ancap::ErrorKind::invalid_geometry, "slit-capacity needs a geometry made of slits");
      ancap::SlitCapacityOptions so;
      if (ratio != "auto") {
        try {
          so.ratio = std::stod(ratio);
        } catch (const std::exception&) {
          throw ancap::Error(ancap::ErrorKind::invalid_parameter, "--ratio must be a number or auto");
        }
        if (!(so.ratio > 0.0 && so.ratio <= 1.0))
          throw ancap::Error(ancap::ErrorKind::invalid_parameter, "--ratio must lie in (0, 1]");
      }
      so.iteration.eps = eps;
      so.iteration.max_iters = max_iter;
      so.iteration.n = n;
      so.iteration.solver = sf.solver();
      so.capacity.solver = sf.solver();
      const auto write_trace = [&](const std::vector<double>& defects) {
        if (trace.empty()) return;
        emit(trace, [&](std::ostream& os) {
          os << "iteration,defect\n";
          char buf[40];
          for (std::size_t i = 0; i < defects.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", defects[i]);
            os << i + 1 << "," << buf << "\n";
          }
        });
      };
      ancap::SlitCapacityResult res;
      try {
        res = ancap::capacity_of_slits(spec.slits(), so);
      } catch (const ancap::IterationFailure& f) {
        write_trace(f.last().defects);
        throw;
      }
      write_trace(res.defects);
      json j = capacity_json(res.capacity);
      j["ratio"] = res.ratio;
      j["preimage_iterations"] = res.preimage_iterations;
      j["defect"] = res.defect;
      emit(out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return 0;
    };
  });

  // reference
  auto* ref = app.add_subcommand("reference", "closed-form capacities");
  std::string ref_case;
  double c = 2.0, r = 1.0, side = 1.0, a = 0.0, b = 1.0;
  ref->add_option("--case", ref_case, "formula")
      ->required()
      ->check(CLI::IsMember({"two-disks", "disk", "square", "segment"}));
  ref->add_option("--c", c, "two-disks: centers at -c and c")->capture_default_str();
  ref->add_option("--r", r, "disk radius")->capture_default_str();
  ref->add_option("--side", side, "square side length")->capture_default_str();
  ref->add_option("--a", a, "segment: left endpoint on the real line")->capture_default_str();
  ref->add_option("--b", b, "segment: right endpoint on the real line")->capture_default_str();
  ref->add_option("--out", out, "output JSON file (default stdout)");
  ref->callback([&] {
    action = [&] {
      const ancap::ExactValue v = ref_case == "two-disks" ? ancap::exact_two_disks(c, r)
                                  : ref_case == "disk"    ? ancap::exact_disk(r)
                                  : ref_case == "square"  ? ancap::exact_square(side)
                                                          : ancap::exact_segment(a, b);
      const json j = {{"value", v.value}, {"formula", v.formula}, {"inputs", v.inputs}};
      emit(out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return 0;
    };
  });

  // table
  auto* table = app.add_subcommand("table", "reproduce a table of reference values");
  std::string id;
  table->add_option("--id", id, "table id")->required()->check(CLI::IsMember({"table1", "table2", "table5", "example36"}));
  table->add_option("--n", n, "override the node count (table2 always sweeps 2^8..2^15)")
      ->check(CLI::NonNegativeNumber);
  table->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  table->add_option("--out", out, "output CSV file (default stdout)");
  table->add_flag("--timings", timings, "add wall times to the CSV");
  sf.add(table);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  std::string experiment;
  ancap::SweepGrid grid;
  int m = 4;
  sweep->add_option("--experiment", experiment, "experiment id")
      ->required()
      ->check(CLI::IsMember({"squares-3cases", "disks-3cases", "two-slits", "four-slits", "ring-disks"}));
  sweep->add_option("--start", grid.start, "first parameter value");
  sweep->add_option("--stop", grid.stop, "last parameter value");
  sweep->add_option("--points", grid.points, "number of grid points")->check(CLI::PositiveNumber);
  sweep->add_option("--m", m, "ring-disks: number of disks")->capture_default_str();
  sweep->add_option("--n", n, "nodes per component")->check(CLI::NonNegativeNumber);
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "output CSV file (default stdout)");
  sweep->add_flag("--timings", timings, "add wall times to the CSV");
  sf.add(sweep);

  // random-disks
  auto* rnd = app.add_subcommand("random-disks", "subadditivity trials on random disk sets");
  int trials = 50, disks = 100;
  std::uint64_t seed = 1;
  rnd->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  rnd->add_option("--disks", disks, "disks per trial")->check(CLI::Range(2, 100000))->capture_default_str();
  rnd->add_option("--seed", seed, "random seed")->capture_default_str();
  rnd->add_option("--n", n, "nodes per disk (default 512)")->check(CLI::NonNegativeNumber);
  rnd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  rnd->add_option("--out", out, "output CSV file (default stdout)");
  rnd->add_flag("--timings", timings, "add wall times to the CSV");
  sf.add(rnd);

  // level-set
  auto* lvl = app.add_subcommand("level-set", "u(x, y) = gamma(E_m U F) on a grid");
  ancap::LevelSetGrid lg;
  lvl->add_option("--m", m, "disks in E_m")->check(CLI::Range(1, 4))->capture_default_str();
  lvl->add_option("--xmin", lg.xmin)->capture_default_str();
  lvl->add_option("--xmax", lg.xmax)->capture_default_str();
  lvl->add_option("--ymin", lg.ymin)->capture_default_str();
  lvl->add_option("--ymax", lg.ymax)->capture_default_str();
  lvl->add_option("--nx", lg.nx)->check(CLI::PositiveNumber)->capture_default_str();
  lvl->add_option("--ny", lg.ny)->check(CLI::PositiveNumber)->capture_default_str();
  lvl->add_option("--n", n, "nodes per disk (default 1024)")->check(CLI::NonNegativeNumber);
  lvl->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  lvl->add_option("--out", out, "output CSV file (default stdout)");
  sf.add(lvl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto experiment_options = [&] {
    ancap::ExperimentOptions o;
    o.n = n;
    o.solver = sf.solver();
    o.grading = sf.grading();
    o.jobs = jobs;
    o.seed = seed;
    o.m = m;
    return o;
  };
  const ancap::CsvMeta meta{app.get_subcommands().front()->get_name(), seed, flag_string(argc, argv)};

  if (table->parsed())
    action = [&] {
      const ancap::TableResult t = ancap::run_table(id, experiment_options());
      emit(out, [&](std::ostream& os) { ancap::write_csv(os, meta, t, timings); });
      int failed = 0;
      for (const auto& row : t.rows) {
        if (!row.error.empty()) std::cerr << "row failed: " << row.error << "\n";
        failed += row.error.empty() ? 0 : 1;
      }
      std::cerr << id << ": " << (t.pass() ? "all rows within tolerance" : "some rows outside tolerance") << "\n";
      return failed ? 1 : 0;
    };
  if (sweep->parsed())
    action = [&] {
      ancap::SweepGrid g = ancap::default_grid(experiment);
      if (sweep->count("--start")) g.start = grid.start;
      if (sweep->count("--stop")) g.stop = grid.stop;
      if (sweep->count("--points")) g.points = grid.points;
      const auto recs = ancap::run_sweep(experiment, g, experiment_options());
      emit(out, [&](std::ostream& os) { ancap::write_csv(os, meta, recs, timings); });
      int failed = 0;
      for (const auto& rec : recs) failed += rec.error.empty() ? 0 : 1;
      return failed ? 1 : 0;
    };
  if (rnd->parsed())
    action = [&] {
      const auto recs = ancap::run_random_disks(trials, disks, experiment_options());
      emit(out, [&](std::ostream& os) { ancap::write_csv(os, meta, recs, timings); });
      int failed = 0;
      for (const auto& rec : recs) failed += rec.error.empty() ? 0 : 1;
      return failed ? 1 : 0;
    };
  if (lvl->parsed())
    action = [&] {
      const auto res = ancap::run_level_set(m, lg, experiment_options());
      emit(out, [&](std::ostream& os) { ancap::write_csv(os, meta, res); });
      int failed = 0;
      for (const auto& c : res.cells) failed += c.error.empty() ? 0 : 1;
      return failed ? 1 : 0;
    };

  try {
    return action();
  } catch (const ancap::Error& e) {
    std::cerr << "error (" << ancap::to_string(e.kind()) << "): " << e.what() << "\n";
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
