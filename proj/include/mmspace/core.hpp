#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmspace {

// Every "strict vs non-strict" comparison in the library is resolved at this
// tolerance unless a caller passes its own.
inline constexpr double kDefaultTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major grid of reals.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Throws Error on ragged input.
  static Grid from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }
  std::span<double> values() { return data_; }

  Grid transposed() const;
  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class ViolationKind { NonSquare, Negative, Asymmetric, NonzeroDiagonal, Triangle };

/// One violated distance-matrix constraint. Indices are zero-based; for a
/// triangle violation (i, j) is the offending pair and k the intermediate.
struct Violation {
  ViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double amount = 0.0;

  std::string describe() const;
};

/// Symmetric, nonnegative, zero-diagonal grid satisfying the triangle
/// inequality (within the tolerance it was validated at). Zero distances
/// between distinct points are allowed.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  std::size_t size() const { return grid_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return grid_(i, j); }
  const Grid& grid() const { return grid_; }

  bool operator==(const DistanceMatrix&) const = default;

  /// Validates and throws Error listing the violations on failure.
  static DistanceMatrix from_grid(const Grid& entries, double tol = kDefaultTolerance);
  static DistanceMatrix zero(std::size_t n);

 private:
  explicit DistanceMatrix(Grid g) : grid_(std::move(g)) {}
  friend struct Validation validate_distance_matrix(const Grid&, double);

  Grid grid_;
};

struct Validation {
  std::optional<DistanceMatrix> matrix;
  std::vector<Violation> violations;

  bool ok() const { return matrix.has_value(); }
};

/// Checks every distance-matrix constraint and reports each violation
/// distinctly. Triangle violations are reported once per unordered pair.
Validation validate_distance_matrix(const Grid& entries, double tol = kDefaultTolerance);
Validation validate_distance_matrix(const std::vector<std::vector<double>>& entries,
                                    double tol = kDefaultTolerance);

/// Finite pseudo-metric measure space.
class FiniteMMS {
 public:
  FiniteMMS() = default;
  FiniteMMS(std::vector<std::string> labels, DistanceMatrix dist, std::vector<double> mass,
            double tol = kDefaultTolerance);
  /// Labels default to "0", "1", ...
  FiniteMMS(DistanceMatrix dist, std::vector<double> mass, double tol = kDefaultTolerance);

  std::size_t size() const { return mass_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const DistanceMatrix& dist() const { return dist_; }
  double distance(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const std::vector<double>& mass() const { return mass_; }

  bool operator==(const FiniteMMS&) const = default;

 private:
  std::vector<std::string> labels_;
  DistanceMatrix dist_;
  std::vector<double> mass_;
};

/// Joint mass over a product of two finite supports, with the ground
/// distances between the supports.
struct Coupling {
  Grid mass;
  Grid ground;

  std::size_t rows() const { return mass.rows(); }
  std::size_t cols() const { return mass.cols(); }

  std::vector<double> row_marginal() const;
  std::vector<double> col_marginal() const;
  double total_mass() const;
  Coupling transposed() const { return {mass.transposed(), ground.transposed()}; }

  /// Throws Error when shapes disagree, masses are negative or total mass is
  /// not 1 within tol.
  void validate(double tol = kDefaultTolerance) const;
  bool has_marginals(std::span<const double> p, std::span<const double> q,
                     double tol = kDefaultTolerance) const;
};

struct EnsembleAtom {
  DistanceMatrix matrix;
  double probability = 0.0;
};

/// Finitely supported distribution over distance matrices of one common size.
class MatrixEnsemble {
 public:
  MatrixEnsemble() = default;
  explicit MatrixEnsemble(std::vector<EnsembleAtom> atoms, double tol = kDefaultTolerance);

  const std::vector<EnsembleAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t dimension() const { return atoms_.empty() ? 0 : atoms_.front().matrix.size(); }
  std::vector<double> probabilities() const;

 private:
  std::vector<EnsembleAtom> atoms_;
};

/// Uniform-mass space on the rows of a distance matrix.
FiniteMMS theta_map(const DistanceMatrix& a);

/// Merges points at distance <= tol (transitive closure), summing masses.
/// The class representative is its lowest index; merged labels are joined
/// with '+'.
FiniteMMS quotient_zero_distances(const FiniteMMS& space, double tol = kDefaultTolerance);

/// Pairwise Euclidean distances of a point list.
Grid euclidean_distances(const std::vector<std::vector<double>>& points);

}  // namespace mmspace
