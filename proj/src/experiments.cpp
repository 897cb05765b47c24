#include "ancap/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "ancap/reference.hpp"

namespace ancap {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

CapacityOptions capacity_options(const ExperimentOptions& o, int default_n) {
  CapacityOptions co;
  co.n = o.n > 0 ? o.n : default_n;
  co.grading = o.grading;
  co.solver = o.solver;
  return co;
}

BoundaryCurve square(cplx center, double half) {
  return BoundaryCurve::polygon({center + half * cplx(1, 1), center + half * cplx(-1, 1),
                                 center + half * cplx(-1, -1), center + half * cplx(1, -1)});
}

void finish_row(TableRow& row) {
  row.abs_error = std::abs(row.computed - row.reference);
  row.rel_error = row.abs_error / std::abs(row.reference);
  row.pass = row.error.empty() && (row.absolute ? row.abs_error : row.rel_error) <= row.tolerance;
}

void solve_row(TableRow& row, const std::vector<BoundaryCurve>& curves, const CapacityOptions& co) {
  const auto start = clock_type::now();
  try {
    const CapacityResult res = compute_capacity(curves, co);
    row.computed = res.gamma;
    row.iterations = res.iterations;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.n = co.n;
  row.seconds = elapsed(start);
  finish_row(row);
}

TableResult table1(const ExperimentOptions& o) {
  TableResult t;
  t.id = "table1";
  t.param_names = {"r", "c"};
  const std::vector<std::pair<double, double>> cells = {{0.1, 0.5}, {0.1, 1}, {0.1, 2}, {0.1, 3}, {0.5, 1},
                                                        {0.5, 2},   {0.5, 3}, {1, 2},   {1, 3},   {2, 3}};
  t.rows.resize(cells.size());
  const CapacityOptions co = capacity_options(o, 512);
  parallel_for(cells.size(), o.jobs, [&](std::size_t i) {
    const auto [r, c] = cells[i];
    TableRow& row = t.rows[i];
    row.params = {r, c};
    row.reference = exact_two_disks(c, r).value;
    row.tolerance = 1e-12;
    solve_row(row, {BoundaryCurve::circle(-c, r), BoundaryCurve::circle(c, r)}, co);
  });
  return t;
}

TableResult table2(const ExperimentOptions& o) {
  TableResult t;
  t.id = "table2";
  t.param_names = {"log2n"};
  const std::vector<double> tol = {1e-6, 1e-7, 5e-9, 5e-10, 5e-11, 1e-11, 1e-12, 1e-13};
  const double exact = exact_square(std::sqrt(2.0)).value;
  const std::vector<BoundaryCurve> sq = {BoundaryCurve::polygon({1.0, imag_unit, -1.0, -imag_unit})};
  t.rows.resize(tol.size());
  parallel_for(tol.size(), o.jobs, [&](std::size_t i) {
    TableRow& row = t.rows[i];
    row.params = {static_cast<double>(8 + i)};
    row.reference = exact;
    row.tolerance = tol[i];
    ExperimentOptions oi = o;
    oi.n = 1 << (8 + i);
    solve_row(row, sq, capacity_options(oi, 0));
  });
  // The error must also fall strictly with n.
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    if (!(t.rows[i].rel_error < t.rows[i - 1].rel_error)) t.rows[i].pass = false;
  return t;
}

TableResult table5(const ExperimentOptions& o) {
  TableResult t;
  t.id = "table5";
  t.param_names = {"k", "m"};
  const int kmax = 10;
  t.rows.resize(kmax);
  parallel_for(kmax, o.jobs, [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    TableRow& row = t.rows[i];
    row.params = {static_cast<double>(k), std::ldexp(1.0, k)};
    row.reference = 0.5 * std::pow(2.0 / 3.0, k);
    row.tolerance = k <= 8 ? 1e-9 : 1e-7;
    SlitCapacityOptions so;
    so.ratio = 1.0;
    so.iteration.n = o.n > 0 ? o.n : 64;
    so.iteration.solver = o.solver;
    so.capacity.solver = o.solver;
    row.n = so.iteration.n;
    const auto start = clock_type::now();
    try {
      const SlitCapacityResult res = capacity_of_slits(cantor_slits(k), so);
      row.computed = res.capacity.gamma;
      row.iterations = res.preimage_iterations;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.seconds = elapsed(start);
    finish_row(row);
  });
  return t;
}

TableResult example36(const ExperimentOptions& o) {
  TableResult t;
  t.id = "example36";
  t.param_names = {"m"};
  const std::vector<double> expected = {1.0, 1.98000206142844, 2.88420404308815, 3.67012955644439};
  t.rows.resize(expected.size());
  const CapacityOptions co = capacity_options(o, 1024);
  parallel_for(expected.size(), o.jobs, [&](std::size_t i) {
    TableRow& row = t.rows[i];
    row.params = {static_cast<double>(i + 1)};
    row.reference = expected[i];
    row.tolerance = 1e-10;
    row.absolute = true;
    solve_row(row, ring_disks(static_cast<int>(i) + 1), co);
  });
  return t;
}

// One grid point of a sweep: geometry, bounds and how to solve it.
struct SweepPoint {
  double param = 0.0;
  int variant = 0;
  std::vector<BoundaryCurve> curves;
  std::vector<Slit> slits;
  double lower = 0.0;
  double upper = 0.0;
};

// Pieces that stay put touch their neighbours. Fixed squares are merged into
// one polygon (collinear vertices keep the corner count a multiple of 4).
// Fixed disks touch at single points, so every circle is started half a node
// spacing off the axes to keep nodes away from those points.
std::vector<SweepPoint> three_cases(bool squares, const std::vector<double>& eps, int n) {
  const std::vector<cplx> base = {cplx(1, 1), cplx(-1, 1), cplx(-1, -1), cplx(1, -1)};
  const double piece = squares ? exact_square(2.0).value : 1.0;
  const cplx phase = std::polar(1.0, pi / n);
  std::vector<SweepPoint> pts;
  for (double e : eps)
    for (int variant = 1; variant <= 3; ++variant) {
      SweepPoint p;
      p.param = e;
      p.variant = variant;
      for (const cplx c : base) {
        const bool moves = variant == 1 || (variant == 2 && c.imag() > 0) || (variant == 3 && c == cplx(1, 1));
        if (moves)
          p.curves.push_back(squares ? square((1.0 + e) * c, 1.0)
                                     : BoundaryCurve::circle(0.0, 1.0).transformed(phase, (1.0 + e) * c));
        else if (!squares)
          p.curves.push_back(BoundaryCurve::circle(0.0, 1.0).transformed(phase, c));
      }
      if (squares && variant == 2)
        p.curves.push_back(BoundaryCurve::polygon({cplx(2, -2), cplx(2, 0), cplx(-2, 0), cplx(-2, -2)}));
      if (squares && variant == 3)
        p.curves.push_back(BoundaryCurve::polygon({cplx(2, -2), cplx(2, 0), cplx(0, 0), cplx(0, 2), cplx(-2, 2),
                                                   cplx(-2, 0), cplx(-2, -2), cplx(0, -2)}));
      p.upper = 4.0 * piece;
      // Squares: the capacity of the unsplit 4x4 square. Disks: E contains a
      // unit disk.
      p.lower = squares ? exact_square(4.0).value : 1.0;
      pts.push_back(std::move(p));
    }
  return pts;
}

std::vector<SweepPoint> sweep_points(const std::string& experiment, const std::vector<double>& values, int m, int n) {
  std::vector<SweepPoint> pts;
  if (experiment == "squares-3cases") return three_cases(true, values, n);
  if (experiment == "disks-3cases") return three_cases(false, values, n);
  for (double v : values) {
    SweepPoint p;
    p.param = v;
    if (experiment == "two-slits") {
      const cplx rot = std::polar(1.0, v * pi);
      p.slits = {slit_from_endpoints(0.1, 1.1), slit_from_endpoints(0.1 * rot, 1.1 * rot)};
      p.lower = 0.25;
      p.upper = 0.5;
    } else if (experiment == "four-slits") {
      const double l = 1.0 - v;
      p.slits = {slit_from_endpoints(cplx(-l, -1), cplx(l, -1)), slit_from_endpoints(cplx(1, -l), cplx(1, l)),
                 slit_from_endpoints(cplx(l, 1), cplx(-l, 1)), slit_from_endpoints(cplx(-1, l), cplx(-1, -l))};
      p.lower = 0.5 * l;
      p.upper = 2.0 * l;
    } else if (experiment == "ring-disks") {
      p.curves = ring_disks(m, v);
      p.lower = 1.0;
      p.upper = m;
    } else {
      throw Error(ErrorKind::invalid_parameter, "unknown sweep experiment '" + experiment + "'");
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

bool TableResult::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.pass; });
}

TableResult run_table(const std::string& id, const ExperimentOptions& options) {
  if (id == "table1") return table1(options);
  if (id == "table2") return table2(options);
  if (id == "table5") return table5(options);
  if (id == "example36") return example36(options);
  throw Error(ErrorKind::invalid_parameter, "unknown table id '" + id + "'");
}

std::vector<double> SweepGrid::values() const {
  if (points < 1) throw Error(ErrorKind::invalid_parameter, "a sweep needs at least one grid point");
  if (points == 1) return {start};
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (points - 1);
  return v;
}

SweepGrid default_grid(const std::string& experiment) {
  if (experiment == "squares-3cases" || experiment == "disks-3cases") return {0.05, 2.0, 40};
  if (experiment == "two-slits") return {0.05, 1.0, 20};
  if (experiment == "four-slits") return {0.01, 0.99, 15};
  if (experiment == "ring-disks") return {1.5, 20.0, 38};
  throw Error(ErrorKind::invalid_parameter, "unknown sweep experiment '" + experiment + "'");
}

std::vector<SweepRecord> run_sweep(const std::string& experiment, const SweepGrid& grid,
                                   const ExperimentOptions& options) {
  // Admissible ranges: the pieces must stay disjoint.
  const std::pair<double, double> range = experiment == "two-slits"    ? std::pair{0.05, 1.0}
                                          : experiment == "four-slits" ? std::pair{0.01, 0.99}
                                          : experiment == "ring-disks" ? std::pair{1.5, 100.0}
                                                                       : std::pair{0.01, 100.0};
  default_grid(experiment);  // rejects unknown ids
  const std::vector<double> values = grid.values();
  for (double v : values)
    if (!(v >= range.first - 1e-12 && v <= range.second + 1e-12))
      throw Error(ErrorKind::invalid_parameter, experiment + " parameter must lie in [" +
                                                    std::to_string(range.first) + ", " +
                                                    std::to_string(range.second) + "]");
  if (experiment == "ring-disks" && options.m < 2)
    throw Error(ErrorKind::invalid_parameter, "ring-disks needs m >= 2");

  const std::vector<SweepPoint> pts = sweep_points(experiment, values, options.m, options.n > 0 ? options.n : 1024);
  std::vector<SweepRecord> out(pts.size());
  parallel_for(pts.size(), options.jobs, [&](std::size_t i) {
    const SweepPoint& p = pts[i];
    SweepRecord& rec = out[i];
    rec.param = p.param;
    rec.variant = p.variant;
    rec.lower = p.lower;
    rec.upper = p.upper;
    const auto start = clock_type::now();
    try {
      if (!p.slits.empty()) {
        SlitCapacityOptions so;
        so.iteration.n = options.n;
        so.iteration.solver = options.solver;
        so.capacity.solver = options.solver;
        const SlitCapacityResult res = capacity_of_slits(SlitSet(p.slits), so);
        rec.gamma = res.capacity.gamma;
        rec.n = res.capacity.n;
        rec.iterations = res.capacity.iterations;
        rec.axis_ratio = res.ratio;
        rec.preimage_iterations = res.preimage_iterations;
      } else {
        const CapacityResult res = compute_capacity(p.curves, capacity_options(options, 1024));
        rec.gamma = res.gamma;
        rec.n = res.n;
        rec.iterations = res.iterations;
      }
      rec.ratio = rec.gamma / rec.upper;
      rec.within_bounds = rec.gamma >= rec.lower - 1e-9 && rec.gamma <= rec.upper + 1e-9;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    rec.seconds = elapsed(start);
  });
  return out;
}

std::vector<Disk> place_random_disks(int count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> radius(0.2, 0.8);
  std::vector<Disk> disks;
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      const Disk d{cplx(coord(rng), coord(rng)), radius(rng)};
      placed = std::all_of(disks.begin(), disks.end(), [&](const Disk& o) {
        return std::abs(d.center - o.center) >= d.radius + o.radius + 0.02;
      });
      if (placed) disks.push_back(d);
    }
    if (!placed) return {};
  }
  return disks;
}

std::vector<RandomDiskRecord> run_random_disks(int trials, int disks, const ExperimentOptions& options) {
  if (trials < 1) throw Error(ErrorKind::invalid_parameter, "trials must be at least 1");
  if (disks < 2) throw Error(ErrorKind::invalid_parameter, "random-disks needs at least 2 disks");

  // Draw every configuration up front so results do not depend on --jobs.
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<Disk>> sets;
  std::vector<RandomDiskRecord> out(static_cast<std::size_t>(trials));
  for (int j = 0; j < trials; ++j) {
    sets.push_back(place_random_disks(disks, rng));
    out[static_cast<std::size_t>(j)].trial = j + 1;
    out[static_cast<std::size_t>(j)].disks = disks;
    out[static_cast<std::size_t>(j)].split = std::uniform_int_distribution<int>(1, disks - 1)(rng);
  }

  const CapacityOptions co = capacity_options(options, 512);
  parallel_for(out.size(), options.jobs, [&](std::size_t j) {
    RandomDiskRecord& rec = out[j];
    const auto start = clock_type::now();
    if (sets[j].empty()) {
      rec.error = "could not place the disks";
      return;
    }
    std::vector<BoundaryCurve> all;
    for (const Disk& d : sets[j]) all.push_back(BoundaryCurve::circle(d.center, d.radius));
    const auto split = all.begin() + rec.split;
    try {
      rec.gamma_e = compute_capacity(std::vector<BoundaryCurve>(all.begin(), split), co).gamma;
      rec.gamma_f = compute_capacity(std::vector<BoundaryCurve>(split, all.end()), co).gamma;
      const CapacityResult u = compute_capacity(all, co);
      rec.gamma_union = u.gamma;
      rec.iterations = u.iterations;
      rec.ratio = rec.gamma_union / (rec.gamma_e + rec.gamma_f);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    rec.seconds = elapsed(start);
  });
  return out;
}

std::vector<BoundaryCurve> ring_disks(int m, double radius) {
  if (m < 1) throw Error(ErrorKind::invalid_parameter, "m must be at least 1");
  if (m == 1) return {BoundaryCurve::circle(0.0, 1.0)};
  std::vector<BoundaryCurve> out;
  for (int k = 1; k <= m; ++k) out.push_back(BoundaryCurve::circle(std::polar(radius, two_pi * k / m), 1.0));
  return out;
}

LevelSetResult run_level_set(int m, const LevelSetGrid& grid, const ExperimentOptions& options) {
  if (m < 1 || m > 4) throw Error(ErrorKind::invalid_parameter, "level-set needs m in {1, 2, 3, 4}");
  if (grid.nx < 1 || grid.ny < 1 || !(grid.xmax >= grid.xmin) || !(grid.ymax >= grid.ymin))
    throw Error(ErrorKind::invalid_parameter, "invalid level-set grid");
  const std::vector<BoundaryCurve> em = ring_disks(m);
  const CapacityOptions co = capacity_options(options, 1024);

  LevelSetResult res;
  res.m = m;
  res.gamma_em = compute_capacity(em, co).gamma;
  const auto coord = [](double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  };
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      LevelCell c;
      c.x = coord(grid.xmin, grid.xmax, grid.nx, ix);
      c.y = coord(grid.ymin, grid.ymax, grid.ny, iy);
      const cplx z(c.x, c.y);
      c.masked = std::any_of(em.begin(), em.end(),
                             [&](const BoundaryCurve& d) { return std::abs(z - d.center()) < 2.02; });
      res.cells.push_back(c);
    }
  parallel_for(res.cells.size(), options.jobs, [&](std::size_t i) {
    LevelCell& c = res.cells[i];
    if (c.masked) return;
    std::vector<BoundaryCurve> all = em;
    all.push_back(BoundaryCurve::circle(cplx(c.x, c.y), 1.0));
    try {
      c.u = compute_capacity(all, co).gamma;
    } catch (const std::exception& e) {
      c.masked = true;
      c.error = e.what();
    }
  });
  return res;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch == '\n' ? ' ' : ch;
  }
  return q + "\"";
}

void meta_line(std::ostream& os, const CsvMeta& meta) {
  os << "# ancap " << version << " command=" << meta.command << " seed=" << meta.seed << " flags=" << meta.flags
     << "\n";
}

}  // namespace

void write_csv(std::ostream& os, const CsvMeta& meta, const TableResult& table, bool timings) {
  meta_line(os, meta);
  for (const auto& p : table.param_names) os << p << ",";
  os << "n,computed,reference,abs_error,rel_error,tolerance,tolerance_kind,pass,iterations";
  if (timings) os << ",seconds";
  os << ",error\n";
  for (const TableRow& r : table.rows) {
    for (double p : r.params) os << num(p) << ",";
    os << r.n << "," << num(r.computed) << "," << num(r.reference) << "," << num(r.abs_error) << ","
       << num(r.rel_error) << "," << num(r.tolerance) << "," << (r.absolute ? "absolute" : "relative") << ","
       << (r.pass ? "yes" : "no") << "," << r.iterations;
    if (timings) os << "," << num(r.seconds);
    os << "," << text(r.error) << "\n";
  }
}

void write_csv(std::ostream& os, const CsvMeta& meta, const std::vector<SweepRecord>& records, bool timings) {
  meta_line(os, meta);
  os << "param,case,gamma,lower,upper,ratio,within_bounds,n,iterations,axis_ratio,preimage_iterations";
  if (timings) os << ",seconds";
  os << ",error\n";
  for (const SweepRecord& r : records) {
    os << num(r.param) << "," << r.variant << "," << num(r.gamma) << "," << num(r.lower) << "," << num(r.upper)
       << "," << num(r.ratio) << "," << (r.within_bounds ? "yes" : "no") << "," << r.n << "," << r.iterations
       << "," << num(r.axis_ratio) << "," << r.preimage_iterations;
    if (timings) os << "," << num(r.seconds);
    os << "," << text(r.error) << "\n";
  }
}

void write_csv(std::ostream& os, const CsvMeta& meta, const std::vector<RandomDiskRecord>& records, bool timings) {
  meta_line(os, meta);
  os << "trial,disks,split,gamma_e,gamma_f,gamma_union,ratio,iterations";
  if (timings) os << ",seconds";
  os << ",error\n";
  for (const RandomDiskRecord& r : records) {
    os << r.trial << "," << r.disks << "," << r.split << "," << num(r.gamma_e) << "," << num(r.gamma_f) << ","
       << num(r.gamma_union) << "," << num(r.ratio) << "," << r.iterations;
    if (timings) os << "," << num(r.seconds);
    os << "," << text(r.error) << "\n";
  }
}

void write_csv(std::ostream& os, const CsvMeta& meta, const LevelSetResult& level) {
  meta_line(os, meta);
  os << "x,y,masked,u,lower,upper,error\n";
  for (const LevelCell& c : level.cells)
    os << num(c.x) << "," << num(c.y) << "," << (c.masked ? "yes" : "no") << "," << (c.masked ? "nan" : num(c.u))
       << "," << num(level.gamma_em) << "," << num(level.gamma_em + 1.0) << "," << text(c.error) << "\n";
}

}  // namespace ancap
