#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "ancap/slitmap.hpp"
#include "ancap/szego.hpp"

namespace ancap {

inline constexpr const char* version = "0.1.0";

struct ExperimentOptions {
  int n = 0;  ///< nodes per component; 0 uses the experiment's default
  SolverOptions solver;
  GradingOptions grading;
  int jobs = 1;
  std::uint64_t seed = 1;
  int m = 4;  ///< disk count for ring-disks and level-set
};

/// Runs body(0..count-1) on up to `jobs` threads. Exceptions escaping body
/// are rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// Tables

struct TableRow {
  std::vector<double> params;
  int n = 0;
  double computed = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool absolute = false;  ///< tolerance applies to abs_error instead of rel_error
  bool pass = false;
  int iterations = 0;
  double seconds = 0.0;
  std::string error;
};

struct TableResult {
  std::string id;
  std::vector<std::string> param_names;
  std::vector<TableRow> rows;
  bool pass() const;
};

/// id in {table1, table2, table5, example36}. Solver failures are recorded
/// in the row and do not stop the run.
TableResult run_table(const std::string& id, const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepGrid {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  std::vector<double> values() const;
};

/// Default grid and admissible parameter range for a sweep experiment.
SweepGrid default_grid(const std::string& experiment);

struct SweepRecord {
  double param = 0.0;
  int variant = 0;  ///< case (i)-(iii) for the 3cases sweeps, else 0
  double gamma = 0.0;
  double lower = 0.0;
  double upper = 0.0;  ///< sum of the capacities of the pieces
  double ratio = 0.0;  ///< gamma / upper
  bool within_bounds = false;
  int n = 0;
  int iterations = 0;
  double axis_ratio = 0.0;  ///< slit sweeps only
  int preimage_iterations = 0;
  double seconds = 0.0;
  std::string error;
};

/// experiment in {squares-3cases, disks-3cases, two-slits, four-slits,
/// ring-disks}. Records come back in grid order.
std::vector<SweepRecord> run_sweep(const std::string& experiment, const SweepGrid& grid,
                                   const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// Random disks

struct Disk {
  cplx center;
  double radius = 0.0;
};

/// Non-overlapping disks with radii in (0.2, 0.8), centers uniform in
/// [-10, 10]^2 and pairwise gaps of at least 0.02. Returns an empty vector
/// when some disk cannot be placed within 10^4 attempts.
std::vector<Disk> place_random_disks(int count, std::mt19937_64& rng);

struct RandomDiskRecord {
  int trial = 0;
  int disks = 0;
  int split = 0;  ///< E holds disks [0, split), F the rest
  double gamma_e = 0.0;
  double gamma_f = 0.0;
  double gamma_union = 0.0;
  double ratio = 0.0;
  int iterations = 0;  ///< GMRES iterations for the union
  double seconds = 0.0;
  std::string error;
};

std::vector<RandomDiskRecord> run_random_disks(int trials, int disks, const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// Level set of u(x, y) = gamma(E_m U F)

struct LevelSetGrid {
  double xmin = -10.0, xmax = 10.0;
  double ymin = -10.0, ymax = 10.0;
  int nx = 21, ny = 21;
};

struct LevelCell {
  double x = 0.0;
  double y = 0.0;
  bool masked = false;
  double u = 0.0;
  std::string error;
};

struct LevelSetResult {
  int m = 0;
  double gamma_em = 0.0;
  std::vector<LevelCell> cells;  ///< row-major in y, then x
};

/// Unit disks centred at 5 e^{2 k pi i / m} (the unit disk at 0 for m = 1).
std::vector<BoundaryCurve> ring_disks(int m, double radius = 5.0);

LevelSetResult run_level_set(int m, const LevelSetGrid& grid, const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// CSV output

struct CsvMeta {
  std::string command;
  std::uint64_t seed = 0;
  std::string flags;
};

/// Wall times are written only when `timings` is set, so that repeated runs
/// produce identical files.
void write_csv(std::ostream& os, const CsvMeta& meta, const TableResult& table, bool timings = false);
void write_csv(std::ostream& os, const CsvMeta& meta, const std::vector<SweepRecord>& records, bool timings = false);
void write_csv(std::ostream& os, const CsvMeta& meta, const std::vector<RandomDiskRecord>& records,
               bool timings = false);
void write_csv(std::ostream& os, const CsvMeta& meta, const LevelSetResult& level);

}  // namespace ancap
