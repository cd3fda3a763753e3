#include "mmspace/matmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmspace/rng.hpp"
#include "mmspace/vertex_cover.hpp"

namespace mmspace {

namespace detail {

namespace {

std::vector<double> radius_candidates(const Grid& gaps, std::size_t k, std::size_t denominator) {
  std::vector<double> c;
  c.reserve(k * (k + 1) / 2 + denominator + 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) c.push_back(gaps(i, j));
  for (std::size_t m = 0; m <= denominator; ++m)
    c.push_back(static_cast<double>(m) / static_cast<double>(denominator));
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

bool exclusion_feasible(const Grid& gaps, std::size_t k, std::size_t denominator, double rho,
                        double tol, std::vector<std::size_t>* cover) {
  const double budget_real = static_cast<double>(denominator) * rho + tol;
  const auto budget = static_cast<std::size_t>(std::floor(budget_real));
  Graph g(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j)
      if (gaps(i, j) > rho + tol) g.add_edge(i, j);
  auto c = min_vertex_cover(g, budget);
  if (!c) return false;
  if (cover) *cover = std::move(*c);
  return true;
}

ExclusionRadius least_exclusion_radius(const Grid& gaps, std::size_t k, std::size_t denominator,
                                       double tol) {
  const auto cand = radius_candidates(gaps, k, denominator);
  // Feasibility is monotone in rho and the largest candidate is always feasible.
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (exclusion_feasible(gaps, k, denominator, cand[mid], tol))
      hi = mid;
    else
      lo = mid + 1;
  }
  ExclusionRadius out;
  out.value = cand[lo];
  exclusion_feasible(gaps, k, denominator, out.value, tol, &out.cover);
  return out;
}

}  // namespace detail

namespace {

void check_pair(const Grid& a, const Grid& b, double tol) {
  if (!a.square() || !b.square() || a.rows() != b.rows())
    throw Error("dimension mismatch: matrices must be square and of equal size");
  if (a.rows() == 0) throw Error("empty matrices");
  for (const Grid* m : {&a, &b})
    for (std::size_t i = 0; i < m->rows(); ++i)
      for (std::size_t j = i + 1; j < m->rows(); ++j)
        if (std::abs((*m)(i, j) - (*m)(j, i)) > tol) throw Error("asymmetric input");
}

Grid gap_grid(const Grid& a, const Grid& b) {
  Grid g(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) g(i, j) = std::abs(a(i, j) - b(i, j));
  return g;
}

DmWitness witness_from_gaps(const Grid& gaps, double tol) {
  const std::size_t n = gaps.rows();
  auto r = detail::least_exclusion_radius(gaps, n, n, tol);
  DmWitness w;
  w.value = r.value;
  w.excluded = std::move(r.cover);
  std::vector<char> out(n, 0);
  for (auto i : w.excluded) out[i] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!out[i] && !out[j]) w.max_residual = std::max(w.max_residual, gaps(i, j));
  return w;
}

class PermutationSearch {
 public:
  PermutationSearch(const Grid& a, const Grid& b, double tol)
      : a_(a), b_(b), n_(a.rows()), tol_(tol), gaps_(n_, n_), perm_(n_), used_(n_, 0) {}

  void run() { dfs(0); }
  double best() const { return best_; }
  const std::vector<std::size_t>& best_perm() const { return best_perm_; }

 private:
  void dfs(std::size_t depth) {
    if (depth == n_) {
      const auto r = detail::least_exclusion_radius(gaps_, n_, n_, tol_);
      if (r.value < best_) {
        best_ = r.value;
        best_perm_ = perm_;
      }
      return;
    }
    for (std::size_t c = 0; c < n_ && best_ > 0.0; ++c) {
      if (used_[c]) continue;
      perm_[depth] = c;
      used_[c] = 1;
      for (std::size_t i = 0; i <= depth; ++i)
        gaps_(i, depth) = gaps_(depth, i) = std::abs(a_(i, depth) - b_(perm_[i], c));
      if (promising(depth + 1)) dfs(depth + 1);
      used_[c] = 0;
    }
  }

  // A completion can beat the incumbent only if the assigned block alone is
  // feasible at some radius below it; the block's least radius lies in its own
  // candidate set, so testing the largest candidate below the incumbent is exact.
  bool promising(std::size_t k) const {
    if (best_ == std::numeric_limits<double>::infinity()) return true;
    double below = -1.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j)
        if (gaps_(i, j) < best_) below = std::max(below, gaps_(i, j));
    for (std::size_t m = 0; m <= n_; ++m) {
      const double r = static_cast<double>(m) / static_cast<double>(n_);
      if (r < best_) below = std::max(below, r);
    }
    if (below < 0.0) return false;
    return detail::exclusion_feasible(gaps_, k, n_, below, tol_);
  }

  const Grid& a_;
  const Grid& b_;
  std::size_t n_;
  double tol_;
  Grid gaps_;
  std::vector<std::size_t> perm_;
  std::vector<char> used_;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_perm_;
};

struct Score {
  double value;
  double spread;  // sum of squared gaps, breaks plateaus of the step-valued d_M
  bool operator<(const Score& o) const {
    return value < o.value || (value == o.value && spread < o.spread);
  }
};

Score score(const Grid& a, const Grid& b, std::span<const std::size_t> perm, double tol) {
  const auto gaps = gap_grid(a, permute_symmetric(b, perm));
  double s = 0.0;
  for (double g : gaps.data()) s += g * g;
  return {detail::least_exclusion_radius(gaps, gaps.rows(), gaps.rows(), tol).value, s};
}

std::vector<std::size_t> profile_assignment(const Grid& a, const Grid& b) {
  const std::size_t n = a.rows();
  auto ranks = [n](const Grid& m) {
    std::vector<std::pair<double, std::size_t>> rs(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : m.row(i)) s += v;
      rs[i] = {s, i};
    }
    std::sort(rs.begin(), rs.end());
    return rs;
  };
  const auto ra = ranks(a), rb = ranks(b);
  std::vector<std::size_t> perm(n);
  for (std::size_t r = 0; r < n; ++r) perm[ra[r].second] = rb[r].second;
  return perm;
}

// Largest radius candidate of a full gap grid strictly below `limit`, or -1.
double candidate_below(const Grid& gaps, double limit) {
  const std::size_t n = gaps.rows();
  double below = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (gaps(i, j) < limit) below = std::max(below, gaps(i, j));
  for (std::size_t m = 0; m <= n; ++m) {
    const double r = static_cast<double>(m) / static_cast<double>(n);
    if (r < limit) below = std::max(below, r);
  }
  return below;
}

Score local_search(const Grid& a, const Grid& b, std::vector<std::size_t>& perm, double tol) {
  Score cur = score(a, b, perm, tol);
  const std::size_t n = perm.size();
  for (bool improved = true; improved && cur.value > 0.0;) {
    improved = false;
    Score best = cur;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        std::swap(perm[i], perm[j]);
        const auto gaps = gap_grid(a, permute_symmetric(b, perm));
        std::swap(perm[i], perm[j]);
        // Only swaps at or below the current best value can win; most are
        // rejected by a single feasibility test.
        if (!detail::exclusion_feasible(gaps, n, n, best.value, tol)) continue;
        double spread = 0.0;
        for (double g : gaps.data()) spread += g * g;
        Score s{best.value, spread};
        const double below = candidate_below(gaps, best.value);
        if (below >= 0.0 && detail::exclusion_feasible(gaps, n, n, below, tol))
          s.value = detail::least_exclusion_radius(gaps, n, n, tol).value;
        if (s < best) {
          best = s;
          bi = i;
          bj = j;
        }
      }
    if (best < cur) {
      std::swap(perm[bi], perm[bj]);
      cur = best;
      improved = true;
    }
  }
  return cur;
}

}  // namespace

Grid permute_symmetric(const Grid& b, std::span<const std::size_t> perm) {
  const std::size_t n = perm.size();
  Grid out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = b(perm[i], perm[j]);
  return out;
}

DmWitness dm_distance(const Grid& a, const Grid& b, double tol) {
  check_pair(a, b, tol);
  return witness_from_gaps(gap_grid(a, b), tol);
}

PiWitness dpi_distance(const Grid& a, const Grid& b, const PiOptions& options) {
  check_pair(a, b, options.tolerance);
  const std::size_t n = a.rows();
  PiWitness out;

  if (options.mode == SearchMode::Exact) {
    if (n > options.exact_limit)
      throw Error("exact d_pi limited to n <= " + std::to_string(options.exact_limit) + " (got " +
                  std::to_string(n) + ")");
    PermutationSearch search(a, b, options.tolerance);
    search.run();
    out.permutation = search.best_perm();
    out.exact = true;
  } else {
    auto perm = profile_assignment(a, b);
    Score best = local_search(a, b, perm, options.tolerance);
    out.permutation = perm;
    CounterRng rng(options.seed, 0x5eed);
    for (std::size_t r = 0; r < options.restarts && best.value > 0.0; ++r) {
      std::vector<std::size_t> p(n);
      std::iota(p.begin(), p.end(), 0);
      for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
      const Score s = local_search(a, b, p, options.tolerance);
      if (s < best) {
        best = s;
        out.permutation = p;
      }
    }
    out.exact = false;
  }
  out.inner = witness_from_gaps(gap_grid(a, permute_symmetric(b, out.permutation)), options.tolerance);
  out.value = out.inner.value;
  return out;
}

}  // namespace mmspace
