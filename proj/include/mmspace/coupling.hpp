#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mmspace/core.hpp"

namespace mmspace {

/// Smallest r >= 0 with coupling mass on {ground <= r} at least 1 - r.
/// Exact: the minimum over sorted distinct ground distances d_k of
/// max(d_k, 1 - C_k), C_k the cumulative mass up to d_k, and 1 for r = 0.
double delta_of_coupling(const Coupling& c, double tol = kDefaultTolerance);

struct ProkhorovResult {
  double value = 1.0;
  Coupling coupling;
};

enum class FlowArithmetic { Floating, Rational };

/// Levy-Prokhorov distance between p (rows) and q (columns) under the cross
/// distance grid d. For each breakpoint v of d the maximum coupling mass on
/// {d <= v} comes from an incremental max-flow; the answer is the least
/// max(v, 1 - flow(v)). The witness is the optimal flow with leftover mass
/// filled northwest-corner. Rational mode runs the flow in exact arithmetic.
ProkhorovResult prokhorov_distance(std::span<const double> p, std::span<const double> q, const Grid& d,
                                   FlowArithmetic arithmetic = FlowArithmetic::Floating,
                                   double tol = kDefaultTolerance);

struct BirkhoffTerm {
  double coefficient = 0.0;
  std::vector<std::size_t> permutation;  // row i -> column permutation[i]
};

struct BirkhoffDecomposition {
  std::vector<BirkhoffTerm> terms;

  Grid reconstruct(std::size_t n) const;
};

/// Peels bottleneck perfect matchings off the positive support until nothing
/// is left, then prunes to at most (n-1)^2 + 1 terms by Caratheodory
/// reduction if needed.
BirkhoffDecomposition birkhoff_decompose(const Grid& s, double tol = kDefaultTolerance);

struct EpsMatching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted by row
  double epsilon = 0.0;
};

/// Maximum-cardinality matching on {(i, j) : cross(i, j) < epsilon} by
/// augmenting paths, scanning vertices in index order.
EpsMatching epsilon_matching(const Grid& cross, double epsilon);

/// 1 - sum_i min(p_i, q_i).
double overlap_coupling_bound(std::span<const double> p, std::span<const double> q);

}  // namespace mmspace
