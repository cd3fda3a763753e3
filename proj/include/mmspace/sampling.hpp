#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mmspace/core.hpp"
#include "mmspace/rng.hpp"

namespace mmspace {

struct FiniteModel {
  FiniteMMS space;
};

/// Circle of the given circumference, arc-length metric, uniform measure.
struct CircleModel {
  double circumference = 1.0;
};

/// [0, 1] with the uniform measure.
struct IntervalModel {};

struct EuclideanModel {
  std::vector<std::vector<double>> coords;
  std::vector<double> mass;
};

using ModelSpace = std::variant<FiniteModel, CircleModel, IntervalModel, EuclideanModel>;

/// {"kind": "finite" | "circle" | "interval" | "euclidean", ...}. Without a
/// kind the object is read as a FiniteMMS.
ModelSpace model_from_json(const nlohmann::json& j, double tol = kDefaultTolerance);

/// Finite view of a finitely supported model; throws for continuous kinds.
FiniteMMS as_finite(const ModelSpace& space);

/// N i.i.d. atom indices drawn from a mass vector.
std::vector<std::size_t> sample_indices(std::span<const double> mass, std::size_t n, CounterRng& rng);

/// Empirical space of N i.i.d. draws: uniform mass 1/N, induced pseudo-metric.
/// Bit-for-bit deterministic in (space, n, seed, stream).
FiniteMMS empirical_space(const ModelSpace& space, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// Exact law of the labeled distance matrix of N i.i.d. draws from a finite
/// space: all k^N tuples, identical matrices merged, atoms in lexicographic
/// order of their entries. Throws when k^N exceeds the budget.
MatrixEnsemble enumerate_matrix_ensemble(const FiniteMMS& space, std::size_t n,
                                         std::uint64_t budget = 1'000'000);

struct NetPartition {
  std::vector<std::size_t> centers;     // point indices
  std::vector<std::size_t> assignment;  // point -> position in centers
  double epsilon = 0.0;
};

/// Greedy net: scan points in index order, adding each point farther than
/// epsilon from every chosen center; then assign each point to its nearest
/// center (ties to the earliest center).
NetPartition epsilon_net_partition(const FiniteMMS& space, double epsilon);

struct HatSpace {
  FiniteMMS space;
  /// Rows: centers, columns: original points; mass mu(x) on (center(x), x).
  Coupling witness;
};

HatSpace hat_space(const FiniteMMS& space, const NetPartition& net);

/// Pushes a measure on the points of `space` forward to the centers of `net`.
std::vector<double> push_forward(const NetPartition& net, std::span<const double> mass);

}  // namespace mmspace
