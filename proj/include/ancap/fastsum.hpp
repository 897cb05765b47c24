#pragma once

#include <memory>
#include <vector>

#include "ancap/types.hpp"

namespace ancap {

enum class SumMethod { dense, tree, automatic };

struct FastSumOptions {
  SumMethod method = SumMethod::automatic;
  double tol = 0.5e-15;       ///< accepted range [1e-16, 1e-6]
  int dense_threshold = 2048;  ///< automatic uses the dense path up to this many points
  double theta = 0.5;          ///< admissibility: r_target + r_source < theta * distance
};

/// out_i = sum_{j != i} q_j / (z_i - z_j), summed in index order.
/// Throws degenerate_geometry if two points coincide.
std::vector<cplx> cauchy_sum_dense(const std::vector<cplx>& points, const std::vector<cplx>& charges);

/// Same sums through the hierarchical evaluator, accurate to about
/// tol * (sum |q_j|) / (typical separation).
std::vector<cplx> cauchy_sum_fast(const std::vector<cplx>& points, const std::vector<cplx>& charges,
                                  double tol = 0.5e-15);

/// Reusable evaluator for a fixed point set. The tree and its interaction
/// lists are built once; apply() is const and may be called concurrently.
class CauchySummator {
 public:
  CauchySummator(std::vector<cplx> points, const FastSumOptions& options = {});
  ~CauchySummator();
  CauchySummator(CauchySummator&&) noexcept;
  CauchySummator& operator=(CauchySummator&&) noexcept;

  std::size_t size() const { return points_.size(); }
  bool uses_tree() const { return tree_ != nullptr; }

  std::vector<cplx> apply(const std::vector<cplx>& charges) const;

  /// Evaluates several charge vectors at once; sharing one pass over the
  /// interaction lists.
  std::vector<std::vector<cplx>> apply(const std::vector<const std::vector<cplx>*>& charges) const;

 private:
  struct Tree;
  std::vector<cplx> points_;
  std::unique_ptr<Tree> tree_;
};

}  // namespace ancap
