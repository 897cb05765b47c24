#include "ancap/fastsum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ancap/error.hpp"

namespace ancap {

namespace {

constexpr int leaf_size = 64;
// A near-enough pair is summed directly when that costs less than about four
// translations of the current order.
constexpr double direct_weight = 4.0;

inline cplx reciprocal(cplx d) { return std::conj(d) / std::norm(d); }

void check_distinct(const std::vector<cplx>& points) {
  std::vector<cplx> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) throw Error(ErrorKind::degenerate_geometry, "coincident summation points");
  for (cplx p : points)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw Error(ErrorKind::degenerate_geometry, "non-finite summation point");
}

void check_tol(double tol) {
  if (!(tol >= 1e-16 && tol <= 1e-6)) throw Error(ErrorKind::invalid_parameter, "fast-sum tol must lie in [1e-16, 1e-6]");
}

int order_for(double ratio, double tol) {
  return static_cast<int>(std::ceil(std::log(tol * (1.0 - ratio)) / std::log(ratio)));
}

}  // namespace

std::vector<cplx> cauchy_sum_dense(const std::vector<cplx>& points, const std::vector<cplx>& charges) {
  if (points.size() != charges.size()) throw Error(ErrorKind::invalid_parameter, "points and charges differ in length");
  const std::size_t n = points.size();
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const cplx d = points[i] - points[j];
      if (d == cplx{}) throw Error(ErrorKind::degenerate_geometry, "coincident summation points");
      acc += charges[j] * reciprocal(d);
    }
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tree evaluator

struct CauchySummator::Tree {
  struct Node {
    int begin = 0, end = 0;
    cplx center;
    double radius = 0.0;
    int parent = -1;
    int first_child = -1, child_count = 0;
    int count() const { return end - begin; }
    bool leaf() const { return child_count == 0; }
  };
  struct FarPair {
    int target, source, order;
  };
  struct NearPair {
    int target, source;
  };

  std::vector<int> perm;  // tree position -> caller index
  std::vector<cplx> z;
  std::vector<Node> nodes;
  std::vector<int> children;
  std::vector<FarPair> far;
  std::vector<NearPair> near;
  std::vector<char> has_local;  // node receives a translation itself or through an ancestor
  std::vector<double> binom;  // C(k + l, l) at [k * p_max + l]
  int p_max = 0;
  double theta = 0.5;
  double tol = 0.5e-15;

  void build(int node_index);
  void traverse(int a, int b);
  void finalize();
  void apply(const std::vector<const std::vector<cplx>*>& in, std::vector<std::vector<cplx>>& out) const;
  template <std::size_t sets>
  void apply_block(const std::vector<cplx>* const* in, std::vector<cplx>* out) const;
};

void CauchySummator::Tree::build(int index) {
  Node& node = nodes[static_cast<std::size_t>(index)];
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (int i = node.begin; i < node.end; ++i) {
    xmin = std::min(xmin, z[i].real());
    xmax = std::max(xmax, z[i].real());
    ymin = std::min(ymin, z[i].imag());
    ymax = std::max(ymax, z[i].imag());
  }
  node.center = {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
  double r = 0.0;
  for (int i = node.begin; i < node.end; ++i) r = std::max(r, std::abs(z[i] - node.center));
  node.radius = r;
  if (node.count() <= leaf_size) return;

  const double w = xmax - xmin, h = ymax - ymin;
  const bool split_x = w >= 0.5 * h;
  const bool split_y = h >= 0.5 * w;
  const cplx c = node.center;
  // Partition the index range in place, keeping perm aligned with z.
  auto partition = [&](int lo, int hi, auto pred) {
    int i = lo, j = hi - 1;
    while (true) {
      while (i <= j && pred(z[i])) ++i;
      while (i <= j && !pred(z[j])) --j;
      if (i >= j) break;
      std::swap(z[i], z[j]);
      std::swap(perm[i], perm[j]);
    }
    return i;
  };
  std::vector<std::pair<int, int>> ranges;
  const int begin = node.begin, end = node.end;
  if (split_x && split_y) {
    const int mx = partition(begin, end, [&](cplx p) { return p.real() < c.real(); });
    const int m1 = partition(begin, mx, [&](cplx p) { return p.imag() < c.imag(); });
    const int m2 = partition(mx, end, [&](cplx p) { return p.imag() < c.imag(); });
    ranges = {{begin, m1}, {m1, mx}, {mx, m2}, {m2, end}};
  } else if (split_x) {
    const int mx = partition(begin, end, [&](cplx p) { return p.real() < c.real(); });
    ranges = {{begin, mx}, {mx, end}};
  } else {
    const int my = partition(begin, end, [&](cplx p) { return p.imag() < c.imag(); });
    ranges = {{begin, my}, {my, end}};
  }
  std::vector<int> kids;
  for (auto [lo, hi] : ranges) {
    if (hi <= lo) continue;
    Node child;
    child.begin = lo;
    child.end = hi;
    child.parent = index;
    nodes.push_back(child);
    kids.push_back(static_cast<int>(nodes.size()) - 1);
  }
  nodes[static_cast<std::size_t>(index)].first_child = static_cast<int>(children.size());
  nodes[static_cast<std::size_t>(index)].child_count = static_cast<int>(kids.size());
  children.insert(children.end(), kids.begin(), kids.end());
  for (int k : kids) build(k);
}

void CauchySummator::Tree::traverse(int a, int b) {
  const Node& A = nodes[static_cast<std::size_t>(a)];
  const Node& B = nodes[static_cast<std::size_t>(b)];
  if (a == b) {
    if (A.leaf()) {
      near.push_back({a, a});
      return;
    }
    for (int i = 0; i < A.child_count; ++i)
      for (int j = 0; j < A.child_count; ++j)
        traverse(children[static_cast<std::size_t>(A.first_child + i)],
                 children[static_cast<std::size_t>(A.first_child + j)]);
    return;
  }
  const double dist = std::abs(A.center - B.center);
  if (A.radius + B.radius < theta * dist) {
    const double ratio = (A.radius + B.radius) / dist;
    const int order = ratio <= 0.0 ? 1 : std::clamp(order_for(ratio, tol), 1, p_max);
    const double direct = static_cast<double>(A.count()) * B.count();
    if (direct_weight * direct <= static_cast<double>(order) * order) {
      near.push_back({a, b});
    } else {
      far.push_back({a, b, order});
    }
    return;
  }
  if (A.leaf() && B.leaf()) {
    near.push_back({a, b});
    return;
  }
  if (B.leaf() || (!A.leaf() && A.radius >= B.radius)) {
    for (int i = 0; i < A.child_count; ++i) traverse(children[static_cast<std::size_t>(A.first_child + i)], b);
  } else {
    for (int j = 0; j < B.child_count; ++j) traverse(a, children[static_cast<std::size_t>(B.first_child + j)]);
  }
}

void CauchySummator::Tree::finalize() {
  std::stable_sort(far.begin(), far.end(), [](const FarPair& x, const FarPair& y) { return x.target < y.target; });
  std::stable_sort(near.begin(), near.end(), [](const NearPair& x, const NearPair& y) { return x.target < y.target; });
  has_local.assign(nodes.size(), 0);
  for (const FarPair& f : far) has_local[static_cast<std::size_t>(f.target)] = 1;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].parent >= 0 && has_local[static_cast<std::size_t>(nodes[i].parent)]) has_local[i] = 1;
  const auto pm = static_cast<std::size_t>(p_max);
  binom.assign(pm * pm, 0.0);
  // C(k + l, l) by Pascal's rule on the (k, l) grid.
  for (std::size_t k = 0; k < pm; ++k)
    for (std::size_t l = 0; l < pm; ++l)
      binom[k * pm + l] = (k == 0 || l == 0) ? 1.0 : binom[(k - 1) * pm + l] + binom[k * pm + l - 1];
}

void CauchySummator::Tree::apply(const std::vector<const std::vector<cplx>*>& in,
                                 std::vector<std::vector<cplx>>& out) const {
  out.assign(in.size(), std::vector<cplx>(z.size()));
  // Sets are processed in pairs; fixed block sizes let the set loops unroll.
  std::size_t s = 0;
  for (; s + 2 <= in.size(); s += 2) apply_block<2>(&in[s], &out[s]);
  if (s < in.size()) apply_block<1>(&in[s], &out[s]);
}

template <std::size_t sets>
void CauchySummator::Tree::apply_block(const std::vector<cplx>* const* in, std::vector<cplx>* out) const {
  const std::size_t n = z.size();
  const auto pm = static_cast<std::size_t>(p_max);
  // Charges in tree order, interleaved by set: q[i * sets + s].
  std::vector<cplx> q(n * sets);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < sets; ++s) q[i * sets + s] = (*in[s])[static_cast<std::size_t>(perm[i])];

  const std::size_t block = pm * sets;
  auto scaled = [](const Node& node) { return node.radius > 0.0 ? 1.0 / node.radius : 1.0; };

  // Upward pass: leaf moments from points, then shifted into each parent.
  std::vector<cplx> mult(nodes.size() * block);
  std::vector<cplx> pw(pm), x(block), y(block);
  for (std::size_t b = nodes.size(); b-- > 0;) {
    const Node& B = nodes[b];
    cplx* a = &mult[b * block];
    if (B.leaf()) {
      const double scale = scaled(B);
      for (int j = B.begin; j < B.end; ++j) {
        const cplx w = (z[static_cast<std::size_t>(j)] - B.center) * scale;
        const cplx* qj = &q[static_cast<std::size_t>(j) * sets];
        cplx wk = 1.0;
        for (std::size_t k = 0; k < pm; ++k) {
          for (std::size_t s = 0; s < sets; ++s) a[k * sets + s] += qj[s] * wk;
          wk *= w;
        }
      }
    }
    if (B.parent < 0) continue;
    const Node& P = nodes[static_cast<std::size_t>(B.parent)];
    const double inv = 1.0 / P.radius;
    const cplx u = (B.center - P.center) * inv;
    const double v = B.radius * inv;
    double vi = 1.0;
    for (std::size_t i = 0; i < pm; ++i) {
      for (std::size_t s = 0; s < sets; ++s) x[i * sets + s] = vi * a[i * sets + s];
      vi *= v;
    }
    pw[0] = 1.0;
    for (std::size_t i = 1; i < pm; ++i) pw[i] = pw[i - 1] * u;
    cplx* ap = &mult[static_cast<std::size_t>(B.parent) * block];
    for (std::size_t k = 0; k < pm; ++k)
      for (std::size_t i = 0; i <= k; ++i) {
        const cplx c = binom[(k - i) * pm + i] * pw[k - i];
        for (std::size_t s = 0; s < sets; ++s) ap[k * sets + s] += c * x[i * sets + s];
      }
  }

  // Multipole-to-local translation for every admissible pair.
  std::vector<cplx> local(nodes.size() * block);
  std::vector<double> xr(2 * block), yr(2 * block);
  for (const FarPair& f : far) {
    const Node& A = nodes[static_cast<std::size_t>(f.target)];
    const Node& B = nodes[static_cast<std::size_t>(f.source)];
    const auto order = static_cast<std::size_t>(f.order);
    const cplx d = A.center - B.center;
    const cplx inv_d = 1.0 / d;
    const cplx u = B.radius * inv_d;
    const cplx v = -A.radius * inv_d;
    const cplx* a = &mult[static_cast<std::size_t>(f.source) * block];
    // Real and imaginary parts of every set stored as separate rows so the
    // binomial product runs as contiguous axpys.
    const std::size_t rows = 2 * sets;
    cplx uk = 1.0;
    for (std::size_t k = 0; k < order; ++k) {
      for (std::size_t s = 0; s < sets; ++s) {
        const cplx t = a[k * sets + s] * uk;
        xr[2 * s * pm + k] = t.real();
        xr[(2 * s + 1) * pm + k] = t.imag();
      }
      uk *= u;
    }
    std::fill(yr.begin(), yr.end(), 0.0);
    for (std::size_t k = 0; k < order; ++k) {
      const double* row = &binom[k * pm];
      for (std::size_t c = 0; c < rows; ++c) {
        const double xv = xr[c * pm + k];
        double* yc = &yr[c * pm];
        for (std::size_t l = 0; l < order; ++l) yc[l] += row[l] * xv;
      }
    }
    cplx* b = &local[static_cast<std::size_t>(f.target) * block];
    cplx vl = inv_d;
    for (std::size_t l = 0; l < order; ++l) {
      for (std::size_t s = 0; s < sets; ++s) b[l * sets + s] += vl * cplx(yr[2 * s * pm + l], yr[(2 * s + 1) * pm + l]);
      vl *= v;
    }
  }

  // Downward pass: shift each local expansion into the children, then
  // evaluate at the leaf points.
  std::vector<cplx> acc(n * sets);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const Node& A = nodes[t];
    const cplx* b = &local[t * block];
    if (!has_local[t]) continue;
    if (A.leaf()) {
      const double scale = scaled(A);
      for (int i = A.begin; i < A.end; ++i) {
        const cplx w = (z[static_cast<std::size_t>(i)] - A.center) * scale;
        cplx* ai = &acc[static_cast<std::size_t>(i) * sets];
        for (std::size_t s = 0; s < sets; ++s) {
          cplx h{};
          for (std::size_t l = pm; l-- > 0;) h = h * w + b[l * sets + s];
          ai[s] += h;
        }
      }
      continue;
    }
    const double inv = 1.0 / A.radius;
    for (int c = 0; c < A.child_count; ++c) {
      const auto ci = static_cast<std::size_t>(children[static_cast<std::size_t>(A.first_child + c)]);
      const Node& C = nodes[ci];
      const cplx u = (C.center - A.center) * inv;
      const double v = C.radius * inv;
      pw[0] = 1.0;
      for (std::size_t i = 1; i < pm; ++i) pw[i] = pw[i - 1] * u;
      std::fill(y.begin(), y.end(), cplx{});
      for (std::size_t k = 0; k < pm; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          const cplx cf = binom[(k - l) * pm + l] * pw[k - l];
          for (std::size_t s = 0; s < sets; ++s) y[l * sets + s] += cf * b[k * sets + s];
        }
      cplx* bc = &local[ci * block];
      double vl = 1.0;
      for (std::size_t l = 0; l < pm; ++l) {
        for (std::size_t s = 0; s < sets; ++s) bc[l * sets + s] += vl * y[l * sets + s];
        vl *= v;
      }
    }
  }

  // Direct interactions.
  for (const NearPair& p : near) {
    const Node& A = nodes[static_cast<std::size_t>(p.target)];
    const Node& B = nodes[static_cast<std::size_t>(p.source)];
    for (int i = A.begin; i < A.end; ++i) {
      cplx* ai = &acc[static_cast<std::size_t>(i) * sets];
      const cplx zi = z[static_cast<std::size_t>(i)];
      for (int j = B.begin; j < B.end; ++j) {
        if (j == i) continue;
        const cplx r = reciprocal(zi - z[static_cast<std::size_t>(j)]);
        const cplx* qj = &q[static_cast<std::size_t>(j) * sets];
        for (std::size_t s = 0; s < sets; ++s) ai[s] += qj[s] * r;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < sets; ++s) out[s][static_cast<std::size_t>(perm[i])] = acc[i * sets + s];
}

CauchySummator::CauchySummator(std::vector<cplx> points, const FastSumOptions& options)
    : points_(std::move(points)) {
  check_tol(options.tol);
  if (!(options.theta > 0.0 && options.theta < 1.0))
    throw Error(ErrorKind::invalid_parameter, "fast-sum theta must lie in (0, 1)");
  if (points_.empty()) throw Error(ErrorKind::invalid_parameter, "no summation points");
  check_distinct(points_);
  const bool tree = options.method == SumMethod::tree ||
                    (options.method == SumMethod::automatic &&
                     points_.size() > static_cast<std::size_t>(std::max(options.dense_threshold, 0)));
  if (!tree || points_.size() < 2) return;

  tree_ = std::make_unique<Tree>();
  Tree& t = *tree_;
  t.theta = options.theta;
  t.tol = options.tol;
  t.p_max = std::max(2, order_for(options.theta, options.tol));
  t.z = points_;
  t.perm.resize(points_.size());
  std::iota(t.perm.begin(), t.perm.end(), 0);
  Tree::Node root;
  root.begin = 0;
  root.end = static_cast<int>(points_.size());
  t.nodes.push_back(root);
  t.build(0);
  t.traverse(0, 0);
  t.finalize();
}

CauchySummator::~CauchySummator() = default;
CauchySummator::CauchySummator(CauchySummator&&) noexcept = default;
CauchySummator& CauchySummator::operator=(CauchySummator&&) noexcept = default;

std::vector<std::vector<cplx>> CauchySummator::apply(const std::vector<const std::vector<cplx>*>& charges) const {
  for (const auto* c : charges)
    if (c == nullptr || c->size() != points_.size())
      throw Error(ErrorKind::invalid_parameter, "charge vector length does not match point count");
  std::vector<std::vector<cplx>> out;
  if (charges.empty()) return out;
  if (tree_) {
    tree_->apply(charges, out);
    return out;
  }
  const std::size_t n = points_.size();
  const std::size_t sets = charges.size();
  out.assign(sets, std::vector<cplx>(n));
  std::vector<cplx> acc(sets);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const cplx r = reciprocal(points_[i] - points_[j]);
      for (std::size_t s = 0; s < sets; ++s) acc[s] += (*charges[s])[j] * r;
    }
    for (std::size_t s = 0; s < sets; ++s) out[s][i] = acc[s];
  }
  return out;
}

std::vector<cplx> CauchySummator::apply(const std::vector<cplx>& charges) const {
  return std::move(apply(std::vector<const std::vector<cplx>*>{&charges}).front());
}

std::vector<cplx> cauchy_sum_fast(const std::vector<cplx>& points, const std::vector<cplx>& charges, double tol) {
  if (points.size() != charges.size()) throw Error(ErrorKind::invalid_parameter, "points and charges differ in length");
  FastSumOptions o;
  o.method = SumMethod::tree;
  o.tol = tol;
  return CauchySummator(points, o).apply(charges);
}

}  // namespace ancap
