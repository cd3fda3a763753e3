#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmspace/core.hpp"
#include "mmspace/matmetric.hpp"

namespace mmspace {

struct Bridge {
  std::size_t left = 0;
  std::size_t right = 0;
  double length = 0.0;
};

/// Pseudo-metric on the disjoint union of two spaces that restricts to each
/// of them exactly.
struct GluedSpace {
  FiniteMMS left;
  FiniteMMS right;
  Grid cross;  // left x right
  std::vector<Bridge> bridges;

  /// (left + right) square grid, left points first.
  Grid full() const;
  GluedSpace mirrored() const;
};

/// Thrown when a relation cannot be glued at the requested bridge length
/// without shortening some intra-space distance.
class NotIsometricError : public Error {
 public:
  using Error::Error;
};

class StrategyError : public Error {
 public:
  using Error::Error;
};

using Relation = std::vector<std::pair<std::size_t, std::size_t>>;

/// Maximal gluing with d(x', y') <= t for every (x', y') in the relation:
/// cross(x, y) = min over the relation of d_X(x, x') + t + d_Y(y', y).
/// The min-plus closure of the union must leave intra-distances unchanged
/// (within tol), otherwise NotIsometricError.
GluedSpace glue_by_relation(const FiniteMMS& x, const FiniteMMS& y, const Relation& relation, double t,
                            double tol = kDefaultTolerance);

/// Largest |d_X(x, x') - d_Y(y, y')| over pairs of related pairs.
double relation_distortion(const FiniteMMS& x, const FiniteMMS& y, const Relation& relation);

enum class GhpStrategy { Permutation, Identify, Net, Best };

GhpStrategy parse_strategy(const std::string& name);
std::string to_string(GhpStrategy s);

struct GhpOptions {
  PiOptions pi;
  /// Anchor pairs tried as one-point gluings when the net strategy has no
  /// other base gluing.
  std::size_t net_anchor_limit = 64;
  double tolerance = kDefaultTolerance;
};

struct GhpBound {
  double upper = 1.0;
  double lower = 0.0;
  GluedSpace gluing;
  Coupling coupling;  // ground distances are gluing.cross
  std::string method;
};

/// Certified upper bound on d_GHP(X, Y): a gluing plus an optimal coupling on
/// it, upper = Delta of that coupling. Computed in both argument orders and
/// the better one kept, so the result is symmetric. Throws StrategyError when
/// the strategy does not apply.
GhpBound ghp_upper_bound(const FiniteMMS& x, const FiniteMMS& y, GhpStrategy strategy = GhpStrategy::Best,
                         const GhpOptions& options = {});

/// Uniform-mass sandwich: lower = d_pi / 2, upper = best strategy bound (which
/// never exceeds d_pi), both for Theta(a) and Theta(b). Also reports d_pi.
struct UniformGhpBound {
  GhpBound bound;
  PiWitness pi;
};
UniformGhpBound ghp_bounds_uniform(const DistanceMatrix& a, const DistanceMatrix& b,
                                   const GhpOptions& options = {});

}  // namespace mmspace
