#include "mmspace/coupling.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <Eigen/Dense>
#include <numeric>

#include "mmspace/flow.hpp"

namespace mmspace {

namespace {

// Mass deficits within tolerance count as zero.
double deficit(double covered, double tol) {
  const double d = 1.0 - covered;
  return d <= tol ? 0.0 : d;
}

void check_mass(std::span<const double> m, double tol, const char* what) {
  double s = 0.0;
  for (double x : m) {
    if (!(x >= -tol)) throw Error(std::string(what) + ": negative mass");
    s += x;
  }
  if (std::abs(s - 1.0) > tol) throw Error(std::string(what) + ": marginal sums to " + std::to_string(s));
}

// Fills leftover row/column mass in northwest-corner order.
void northwest_fill(std::vector<double> rows, std::vector<double> cols, Grid& mass, double tol) {
  std::size_t i = 0, j = 0;
  while (i < rows.size() && j < cols.size()) {
    if (rows[i] <= tol) {
      ++i;
      continue;
    }
    if (cols[j] <= tol) {
      ++j;
      continue;
    }
    const double m = std::min(rows[i], cols[j]);
    mass(i, j) += m;
    rows[i] -= m;
    cols[j] -= m;
  }
}

template <class Scalar>
ProkhorovResult solve_prokhorov(std::span<const double> p, std::span<const double> q, const Grid& d,
                                Scalar zero, double tol) {
  const std::size_t r = p.size(), c = q.size();
  std::vector<Scalar> supply(p.begin(), p.end()), demand(q.begin(), q.end());
  TransportFlow<Scalar> flow(supply, demand, zero);

  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) order.emplace_back(d(i, j), i * c + j);
  std::sort(order.begin(), order.end());

  double best = 1.0;
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> best_flow;
  for (std::size_t k = 0; k < order.size();) {
    const double v = order[k].first;
    if (v >= best) break;
    for (; k < order.size() && order[k].first == v; ++k)
      flow.allow(order[k].second / c, order[k].second % c);
    const double moved = static_cast<double>(flow.augment());
    const double cand = std::max(v, deficit(moved, tol));
    if (cand < best) {
      best = cand;
      best_flow = flow.pair_flows();
    }
  }

  ProkhorovResult out;
  out.value = best;
  out.coupling.mass = Grid(r, c);
  out.coupling.ground = d;
  std::vector<Scalar> row_left(supply), col_left(demand);
  for (const auto& [i, j, f] : best_flow) {
    out.coupling.mass(i, j) = static_cast<double>(f);
    row_left[i] -= f;
    col_left[j] -= f;
  }
  std::vector<double> rl(r), cl(c);
  for (std::size_t i = 0; i < r; ++i) rl[i] = std::max(0.0, static_cast<double>(row_left[i]));
  for (std::size_t j = 0; j < c; ++j) cl[j] = std::max(0.0, static_cast<double>(col_left[j]));
  northwest_fill(std::move(rl), std::move(cl), out.coupling.mass, 0.0);
  return out;
}

// Kuhn's augmenting-path matching; `edge(i, j)` decides adjacency.
template <class Edge>
std::vector<std::ptrdiff_t> max_matching(std::size_t rows, std::size_t cols, Edge edge) {
  std::vector<std::ptrdiff_t> match_col(cols, -1);
  std::vector<char> seen;
  auto try_row = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!edge(i, j) || seen[j]) continue;
      seen[j] = 1;
      if (match_col[j] < 0 || self(self, static_cast<std::size_t>(match_col[j]))) {
        match_col[j] = static_cast<std::ptrdiff_t>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < rows; ++i) {
    seen.assign(cols, 0);
    try_row(try_row, i);
  }
  return match_col;
}

std::optional<std::vector<std::size_t>> perfect_matching_above(const Grid& s, double threshold) {
  const std::size_t n = s.rows();
  const auto mc = max_matching(n, n, [&](std::size_t i, std::size_t j) { return s(i, j) >= threshold; });
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (mc[j] < 0) return std::nullopt;
    perm[static_cast<std::size_t>(mc[j])] = j;
  }
  return perm;
}

// Entries at or below this are treated as exhausted support.
constexpr double kSupportFloor = 1e-14;

// Drops terms while more than (n-1)^2 + 1 remain: an affine dependence among
// the permutation matrices lets one weight reach zero without changing the sum.
void caratheodory_reduce(std::vector<BirkhoffTerm>& terms, std::size_t n) {
  const std::size_t limit = (n - 1) * (n - 1) + 1;
  while (terms.size() > limit) {
    const auto m = static_cast<Eigen::Index>(terms.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * n + 1), m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& perm = terms[static_cast<std::size_t>(k)].permutation;
      for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i * n + perm[i]), k) = 1.0;
      a(static_cast<Eigen::Index>(n * n), k) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd kernel = lu.kernel();
    Eigen::VectorXd alpha = kernel.col(0);
    if (alpha.maxCoeff() <= 0.0) alpha = -alpha;
    double step = std::numeric_limits<double>::infinity();
    Eigen::Index drop = -1;
    for (Eigen::Index k = 0; k < m; ++k)
      if (alpha(k) > 1e-12) {
        const double t = terms[static_cast<std::size_t>(k)].coefficient / alpha(k);
        if (t < step) {
          step = t;
          drop = k;
        }
      }
    for (Eigen::Index k = 0; k < m; ++k) terms[static_cast<std::size_t>(k)].coefficient -= step * alpha(k);
    terms.erase(terms.begin() + drop);
    std::erase_if(terms, [](const BirkhoffTerm& t) { return t.coefficient <= kSupportFloor; });
  }
}

}  // namespace

double delta_of_coupling(const Coupling& c, double tol) {
  c.validate(tol);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(c.mass.data().size());
  for (std::size_t k = 0; k < c.mass.data().size(); ++k) pts.emplace_back(c.ground.data()[k], c.mass.data()[k]);
  std::sort(pts.begin(), pts.end());
  double best = 1.0;
  double cum = 0.0;
  for (std::size_t k = 0; k < pts.size();) {
    const double v = pts[k].first;
    if (v >= best) break;
    for (; k < pts.size() && pts[k].first == v; ++k) cum += pts[k].second;
    best = std::min(best, std::max(v, deficit(cum, tol)));
  }
  return best;
}

ProkhorovResult prokhorov_distance(std::span<const double> p, std::span<const double> q, const Grid& d,
                                   FlowArithmetic arithmetic, double tol) {
  if (d.rows() != p.size() || d.cols() != q.size())
    throw Error("prokhorov: distance grid is " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                " but marginals have sizes " + std::to_string(p.size()) + "," + std::to_string(q.size()));
  check_mass(p, tol, "prokhorov p");
  check_mass(q, tol, "prokhorov q");
  for (double x : d.data())
    if (!(x >= 0.0)) throw Error("prokhorov: negative distance");
  if (arithmetic == FlowArithmetic::Rational) {
    using boost::multiprecision::cpp_rational;
    return solve_prokhorov<cpp_rational>(p, q, d, cpp_rational(0), tol);
  }
  return solve_prokhorov<double>(p, q, d, 1e-15, tol);
}

Grid BirkhoffDecomposition::reconstruct(std::size_t n) const {
  Grid g(n, n);
  for (const auto& t : terms)
    for (std::size_t i = 0; i < n; ++i) g(i, t.permutation[i]) += t.coefficient;
  return g;
}

BirkhoffDecomposition birkhoff_decompose(const Grid& s, double tol) {
  if (!s.square() || s.rows() == 0) throw Error("birkhoff: expected a non-empty square grid");
  const std::size_t n = s.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0, cs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (s(i, j) < -tol) throw Error("birkhoff: negative entry");
      rs += s(i, j);
      cs += s(j, i);
    }
    if (std::abs(rs - 1.0) > tol || std::abs(cs - 1.0) > tol) throw Error("birkhoff: not doubly stochastic");
  }

  Grid rest = s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rest(i, j) < kSupportFloor) rest(i, j) = 0.0;

  BirkhoffDecomposition out;
  for (;;) {
    std::vector<double> levels;
    for (double x : rest.data())
      if (x > kSupportFloor) levels.push_back(x);
    if (levels.empty()) break;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    // Bottleneck matching: the largest threshold still admitting a perfect matching.
    std::optional<std::vector<std::size_t>> perm;
    std::size_t lo = 0, hi = levels.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (auto m = perfect_matching_above(rest, levels[mid])) {
        perm = std::move(m);
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (!perm) {
      if (*std::max_element(rest.data().begin(), rest.data().end()) > 1e-12)
        throw Error("birkhoff: no perfect matching on the remaining support");
      break;
    }

    double coef = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) coef = std::min(coef, rest(i, (*perm)[i]));
    for (std::size_t i = 0; i < n; ++i) {
      double& x = rest(i, (*perm)[i]);
      x = (x == coef) ? 0.0 : x - coef;
      if (x <= kSupportFloor) x = 0.0;
    }
    out.terms.push_back({coef, std::move(*perm)});
  }
  caratheodory_reduce(out.terms, n);
  return out;
}

EpsMatching epsilon_matching(const Grid& cross, double epsilon) {
  EpsMatching out;
  out.epsilon = epsilon;
  const auto mc = max_matching(cross.rows(), cross.cols(),
                               [&](std::size_t i, std::size_t j) { return cross(i, j) < epsilon; });
  for (std::size_t j = 0; j < mc.size(); ++j)
    if (mc[j] >= 0) out.pairs.emplace_back(static_cast<std::size_t>(mc[j]), j);
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

double overlap_coupling_bound(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("overlap bound: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::min(p[i], q[i]);
  return std::max(0.0, 1.0 - s);
}

}  // namespace mmspace
