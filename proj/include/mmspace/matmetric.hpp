#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmspace/core.hpp"

namespace mmspace {

/// Certificate for the exclusion-tolerant matrix distance: outside the
/// excluded rows/columns every entry gap is at most value, and the number of
/// excluded indices is at most n * value.
struct DmWitness {
  double value = 0.0;
  std::vector<std::size_t> excluded;
  double max_residual = 0.0;
};

struct PiWitness {
  double value = 0.0;
  /// Row i of A is matched with row permutation[i] of B.
  std::vector<std::size_t> permutation;
  DmWitness inner;
  /// False when the value is a heuristic upper bound.
  bool exact = true;
};

enum class SearchMode { Exact, Heuristic };

struct PiOptions {
  SearchMode mode = SearchMode::Exact;
  std::size_t exact_limit = 8;
  std::uint64_t seed = 0;
  /// Extra seeded random starts for the heuristic local search.
  std::size_t restarts = 4;
  double tolerance = kDefaultTolerance;
};

/// d_M for symmetric grids of equal size.
///
/// The value is the infimum of rho such that some index set of size < n*rho
/// covers every pair with gap >= rho. It is found among the candidates
/// {gaps} U {k/n}: a candidate rho is feasible when the graph of pairs with
/// gap > rho + tol has a vertex cover of size <= n*rho + tol. Diagonal gaps
/// are self-loops that force their index into the cover.
DmWitness dm_distance(const Grid& a, const Grid& b, double tol = kDefaultTolerance);

/// d_pi: minimum of d_M over simultaneous row/column permutations of b.
/// Exact mode runs a pruned depth-first search in lexicographic order and
/// returns the lexicographically first optimal permutation; it throws Error
/// above options.exact_limit.
PiWitness dpi_distance(const Grid& a, const Grid& b, const PiOptions& options = {});

/// (P b)(i, j) = b(perm[i], perm[j]).
Grid permute_symmetric(const Grid& b, std::span<const std::size_t> perm);

namespace detail {

/// Least feasible exclusion radius for the leading k x k block of a gap grid,
/// with budgets measured against `denominator` rows.
struct ExclusionRadius {
  double value = 0.0;
  std::vector<std::size_t> cover;
};
ExclusionRadius least_exclusion_radius(const Grid& gaps, std::size_t k, std::size_t denominator,
                                       double tol);
bool exclusion_feasible(const Grid& gaps, std::size_t k, std::size_t denominator, double rho,
                        double tol, std::vector<std::size_t>* cover = nullptr);

}  // namespace detail

}  // namespace mmspace
