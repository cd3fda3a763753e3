#include "mmspace/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mmspace {

Grid Grid::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Grid g(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error("ragged grid: row " + std::to_string(i));
    std::copy(rows[i].begin(), rows[i].end(), g.data_.begin() + i * c);
  }
  return g;
}

Grid Grid::transposed() const {
  Grid t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::vector<double>> Grid::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::NonSquare: os << "non-square input"; break;
    case ViolationKind::Negative: os << "negative entry at (" << i << "," << j << ")"; break;
    case ViolationKind::Asymmetric: os << "asymmetry at (" << i << "," << j << ")"; break;
    case ViolationKind::NonzeroDiagonal: os << "nonzero diagonal at (" << i << "," << i << ")"; break;
    case ViolationKind::Triangle:
      os << "triangle violation at (" << i << "," << j << ") via " << k;
      break;
  }
  if (kind != ViolationKind::NonSquare) os << " by " << amount;
  return os.str();
}

Validation validate_distance_matrix(const Grid& a, double tol) {
  Validation out;
  if (!a.square()) {
    out.violations.push_back({ViolationKind::NonSquare});
    return out;
  }
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(a(i, i)) > tol) out.violations.push_back({ViolationKind::NonzeroDiagonal, i, i, 0, a(i, i)});
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) < -tol) out.violations.push_back({ViolationKind::Negative, i, j, 0, -a(i, j)});
      if (j > i && std::abs(a(i, j) - a(j, i)) > tol)
        out.violations.push_back({ViolationKind::Asymmetric, i, j, 0, std::abs(a(i, j) - a(j, i))});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Report the intermediate with the largest excess.
      double worst = tol;
      std::optional<std::size_t> via;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double excess = a(i, j) - (a(i, k) + a(k, j));
        if (excess > worst) {
          worst = excess;
          via = k;
        }
      }
      if (via) out.violations.push_back({ViolationKind::Triangle, i, j, *via, worst});
    }
  }
  if (out.violations.empty()) out.matrix = DistanceMatrix(a);
  return out;
}

Validation validate_distance_matrix(const std::vector<std::vector<double>>& entries, double tol) {
  for (const auto& r : entries) {
    if (r.size() != entries.size()) {
      Validation out;
      out.violations.push_back({ViolationKind::NonSquare});
      return out;
    }
  }
  return validate_distance_matrix(Grid::from_rows(entries), tol);
}

DistanceMatrix DistanceMatrix::from_grid(const Grid& entries, double tol) {
  auto v = validate_distance_matrix(entries, tol);
  if (!v.ok()) {
    std::string msg = "invalid distance matrix:";
    for (std::size_t k = 0; k < std::min<std::size_t>(v.violations.size(), 5); ++k)
      msg += " " + v.violations[k].describe() + ";";
    if (v.violations.size() > 5) msg += " ...";
    throw Error(msg);
  }
  return *std::move(v.matrix);
}

DistanceMatrix DistanceMatrix::zero(std::size_t n) { return DistanceMatrix(Grid(n, n, 0.0)); }

namespace {

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

void check_probability_vector(std::span<const double> mass, double tol, const char* what) {
  double sum = 0.0;
  for (double m : mass) {
    if (!(m >= 0.0)) throw Error(std::string(what) + ": negative or NaN mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > tol) throw Error(std::string(what) + ": masses sum to " + std::to_string(sum));
}

}  // namespace

FiniteMMS::FiniteMMS(std::vector<std::string> labels, DistanceMatrix dist, std::vector<double> mass,
                     double tol)
    : labels_(std::move(labels)), dist_(std::move(dist)), mass_(std::move(mass)) {
  if (labels_.size() != mass_.size() || dist_.size() != mass_.size())
    throw Error("FiniteMMS: labels, distance matrix and mass sizes differ");
  if (mass_.empty()) throw Error("FiniteMMS: empty space");
  check_probability_vector(mass_, tol, "FiniteMMS");
}

FiniteMMS::FiniteMMS(DistanceMatrix dist, std::vector<double> mass, double tol)
    : FiniteMMS(index_labels(dist.size()), std::move(dist), std::move(mass), tol) {}

std::vector<double> Coupling::row_marginal() const {
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (double m : mass.row(i)) out[i] += m;
  return out;
}

std::vector<double> Coupling::col_marginal() const {
  std::vector<double> out(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) out[j] += mass(i, j);
  return out;
}

double Coupling::total_mass() const {
  return std::accumulate(mass.data().begin(), mass.data().end(), 0.0);
}

void Coupling::validate(double tol) const {
  if (mass.rows() != ground.rows() || mass.cols() != ground.cols())
    throw Error("coupling: mass and ground grids differ in shape");
  for (double m : mass.data())
    if (!(m >= -tol)) throw Error("coupling: negative mass");
  for (double d : ground.data())
    if (!(d >= 0.0)) throw Error("coupling: negative ground distance");
  if (std::abs(total_mass() - 1.0) > tol) throw Error("coupling: total mass is not 1");
}

bool Coupling::has_marginals(std::span<const double> p, std::span<const double> q, double tol) const {
  if (p.size() != rows() || q.size() != cols()) return false;
  const auto r = row_marginal();
  const auto c = col_marginal();
  for (std::size_t i = 0; i < r.size(); ++i)
    if (std::abs(r[i] - p[i]) > tol) return false;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (std::abs(c[j] - q[j]) > tol) return false;
  return true;
}

MatrixEnsemble::MatrixEnsemble(std::vector<EnsembleAtom> atoms, double tol) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error("MatrixEnsemble: no atoms");
  const std::size_t n = atoms_.front().matrix.size();
  std::vector<double> probs;
  for (const auto& a : atoms_) {
    if (a.matrix.size() != n) throw Error("MatrixEnsemble: atoms differ in dimension");
    probs.push_back(a.probability);
  }
  check_probability_vector(probs, tol, "MatrixEnsemble");
}

std::vector<double> MatrixEnsemble::probabilities() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.probability);
  return out;
}

FiniteMMS theta_map(const DistanceMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) throw Error("theta_map: empty matrix");
  return FiniteMMS(a, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteMMS quotient_zero_distances(const FiniteMMS& space, double tol) {
  const std::size_t n = space.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space.distance(i, j) <= tol) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<std::size_t> reps;
  std::vector<std::size_t> class_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (r == i) {
      class_of[i] = reps.size();
      reps.push_back(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) class_of[i] = class_of[find(i)];

  const std::size_t m = reps.size();
  if (m == n) return space;
  std::vector<std::string> labels(m);
  std::vector<double> mass(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& l = labels[class_of[i]];
    l += (l.empty() ? "" : "+") + space.labels()[i];
    mass[class_of[i]] += space.mass()[i];
  }
  Grid d(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) d(a, b) = space.distance(reps[a], reps[b]);
  // Representatives may sit up to (class size) * tol apart from merged points,
  // so validate at the widened tolerance.
  return FiniteMMS(std::move(labels), DistanceMatrix::from_grid(d, tol * static_cast<double>(n + 1)),
                   std::move(mass), tol * static_cast<double>(n + 1));
}

Grid euclidean_distances(const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  Grid d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != points.front().size()) throw Error("coords: points differ in dimension");
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        const double t = points[i][k] - points[j][k];
        s += t * t;
      }
      d(i, j) = d(j, i) = std::sqrt(s);
    }
  }
  return d;
}

}  // namespace mmspace
