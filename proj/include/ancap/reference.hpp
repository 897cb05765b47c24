#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ancap/types.hpp"

namespace ancap {

/// A closed-form capacity together with the formula that produced it.
struct ExactValue {
  double value = 0.0;
  std::string formula;
  std::string inputs;
};

/// Gamma(1/4) to double precision.
inline constexpr double gamma_quarter = 3.6256099082219083119;

/// Second Jacobi theta function via its product form
/// 2 q^{1/4} prod_j (1 - q^{2j})(1 + q^{2j})^2, for 0 <= q < 1.
double jacobi_theta2(double q);

/// Two disjoint disks of radius r centred at -c and c.
ExactValue exact_two_disks(double c, double r);

/// A square with the given side length.
ExactValue exact_square(double side);

/// Straight segment [a, b]: |b - a| / 4.
ExactValue exact_segment(cplx a, cplx b);

/// Disjoint real intervals, given sorted by left endpoint.
ExactValue exact_real_union(const std::vector<std::pair<double, double>>& intervals);

ExactValue exact_disk(double r);

}  // namespace ancap
