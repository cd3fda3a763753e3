#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond Grid and the RNG, and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mmspace/core.hpp"
#include "mmspace/rng.hpp"

namespace oracle {

using mmspace::Grid;

// min over exclusion sets L of max(|L|/n, largest gap outside L).
inline double dm(const Grid& a, const Grid& b) {
  const std::size_t n = a.rows();
  double best = 1.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!(mask >> i & 1u) && !(mask >> j & 1u)) gap = std::max(gap, std::abs(a(i, j) - b(i, j)));
    const double cost = static_cast<double>(__builtin_popcount(mask)) / static_cast<double>(n);
    best = std::min(best, std::max(cost, gap));
  }
  return best;
}

inline Grid permuted(const Grid& b, const std::vector<std::size_t>& p) {
  Grid out(b.rows(), b.cols());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) out(i, j) = b(p[i], p[j]);
  return out;
}

inline double dpi(const Grid& a, const Grid& b) {
  std::vector<std::size_t> p(a.rows());
  std::iota(p.begin(), p.end(), 0);
  double best = 1.0;
  do best = std::min(best, dm(a, permuted(b, p)));
  while (std::next_permutation(p.begin(), p.end()));
  return best;
}

// Hall deficit at radius r: max over row sets A of p(A) - q(N_r(A)).
inline double hall_deficit(const std::vector<double>& p, const std::vector<double>& q, const Grid& d, double r) {
  double worst = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << p.size()); ++mask) {
    double pa = 0.0, qn = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (mask >> i & 1u) pa += p[i];
    for (std::size_t j = 0; j < q.size(); ++j) {
      bool near = false;
      for (std::size_t i = 0; i < p.size(); ++i)
        if ((mask >> i & 1u) && d(i, j) <= r) near = true;
      if (near) qn += q[j];
    }
    worst = std::max(worst, pa - qn);
  }
  return worst;
}

// Levy-Prokhorov distance: bisection on r for "deficit(r) <= r", where the
// largest mass on {d <= r} equals 1 - deficit(r) by the marriage theorem.
inline double prokhorov(const std::vector<double>& p, const std::vector<double>& q, const Grid& d) {
  double lo = 0.0, hi = 1.0;
  if (hall_deficit(p, q, d, 0.0) <= 1e-12) return 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hall_deficit(p, q, d, mid) <= mid + 1e-12)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// Delta of a coupling straight from the definition, over every value the
// infimum can sit at.
inline double delta(const Grid& mass, const Grid& ground) {
  std::vector<double> cand{0.0, 1.0};
  for (double v : ground.data()) cand.push_back(v);
  for (double v : ground.data()) {
    double m = 0.0;
    for (std::size_t k = 0; k < mass.data().size(); ++k)
      if (ground.data()[k] <= v) m += mass.data()[k];
    cand.push_back(1.0 - m);
  }
  double best = 1.0;
  for (double r : cand) {
    if (r < 0.0) continue;
    double m = 0.0;
    for (std::size_t k = 0; k < mass.data().size(); ++k)
      if (ground.data()[k] <= r) m += mass.data()[k];
    if (m >= 1.0 - r - 1e-12) best = std::min(best, r);
  }
  return best;
}

// Largest matching in {(i, j) : cross(i, j) < eps} by exhaustive recursion.
inline std::size_t max_matching(const Grid& cross, double eps) {
  std::vector<char> used(cross.cols(), 0);
  auto go = [&](auto&& self, std::size_t i) -> std::size_t {
    if (i == cross.rows()) return 0;
    std::size_t best = self(self, i + 1);
    for (std::size_t j = 0; j < cross.cols(); ++j)
      if (!used[j] && cross(i, j) < eps) {
        used[j] = 1;
        best = std::max(best, 1 + self(self, i + 1));
        used[j] = 0;
      }
    return best;
  };
  return go(go, 0);
}

// All injections Y -> X preserving distances within tol, lexicographic.
inline std::vector<std::vector<std::size_t>> embeddings(const Grid& dy, const Grid& dx, double tol) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t ny = dy.rows(), nx = dx.rows();
  if (ny > nx) return out;
  std::vector<std::size_t> m(ny);
  auto go = [&](auto&& self, std::size_t i) -> void {
    if (i == ny) {
      bool ok = true;
      for (std::size_t a = 0; a < ny; ++a)
        for (std::size_t b = 0; b < ny; ++b) ok = ok && std::abs(dy(a, b) - dx(m[a], m[b])) <= tol;
      if (ok) out.push_back(m);
      return;
    }
    for (std::size_t c = 0; c < nx; ++c) {
      if (std::find(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(i), c) != m.begin() + static_cast<std::ptrdiff_t>(i))
        continue;
      m[i] = c;
      self(self, i + 1);
    }
  };
  go(go, 0);
  return out;
}

// Minimum vertex cover size by subset enumeration; self-loops force vertices.
inline std::size_t vertex_cover(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::size_t best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (auto [u, v] : edges) ok = ok && ((mask >> u & 1u) || (mask >> v & 1u));
    if (ok) best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

}  // namespace oracle

namespace gen {

using mmspace::CounterRng;
using mmspace::Grid;

inline Grid symmetric(std::size_t n, CounterRng& rng, double scale = 1.0) {
  Grid g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = scale * rng.uniform();
  return g;
}

// Symmetric with entries on a coarse lattice, so gaps tie often.
inline Grid lattice_symmetric(std::size_t n, CounterRng& rng, std::uint64_t levels = 4) {
  Grid g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      g(i, j) = g(j, i) = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
  return g;
}

inline std::vector<std::vector<double>> points(std::size_t n, std::size_t dim, CounterRng& rng) {
  std::vector<std::vector<double>> p(n, std::vector<double>(dim));
  for (auto& x : p)
    for (auto& c : x) c = rng.uniform();
  return p;
}

inline mmspace::DistanceMatrix distance_matrix(std::size_t n, CounterRng& rng) {
  return mmspace::DistanceMatrix::from_grid(mmspace::euclidean_distances(points(n, 2, rng)));
}

inline std::vector<double> masses(std::size_t n, CounterRng& rng, bool allow_zero = false) {
  std::vector<double> m(n);
  double s = 0.0;
  for (auto& x : m) {
    x = (allow_zero && rng.below(4) == 0) ? 0.0 : rng.uniform() + 0.05;
    s += x;
  }
  if (s == 0.0) {
    m[0] = 1.0;
    return m;
  }
  for (auto& x : m) x /= s;
  return m;
}

inline mmspace::FiniteMMS space(std::size_t n, CounterRng& rng) {
  return mmspace::FiniteMMS(distance_matrix(n, rng), masses(n, rng));
}

inline std::vector<std::size_t> permutation(std::size_t n, CounterRng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

// Average of k random permutation matrices.
inline Grid doubly_stochastic(std::size_t n, std::size_t k, CounterRng& rng) {
  Grid g(n, n);
  for (std::size_t t = 0; t < k; ++t) {
    const auto p = permutation(n, rng);
    for (std::size_t i = 0; i < n; ++i) g(i, p[i]) += 1.0 / static_cast<double>(k);
  }
  return g;
}

}  // namespace gen
