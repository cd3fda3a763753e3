#include "mmspace/ghp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "mmspace/coupling.hpp"

namespace mmspace {

Grid GluedSpace::full() const {
  const std::size_t nx = left.size(), ny = right.size();
  Grid g(nx + ny, nx + ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j) g(i, j) = left.distance(i, j);
  for (std::size_t i = 0; i < ny; ++i)
    for (std::size_t j = 0; j < ny; ++j) g(nx + i, nx + j) = right.distance(i, j);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) g(i, nx + j) = g(nx + j, i) = cross(i, j);
  return g;
}

GluedSpace GluedSpace::mirrored() const {
  GluedSpace m{right, left, cross.transposed(), {}};
  for (const auto& b : bridges) m.bridges.push_back({b.right, b.left, b.length});
  return m;
}

double relation_distortion(const FiniteMMS& x, const FiniteMMS& y, const Relation& relation) {
  double worst = 0.0;
  for (const auto& [a, b] : relation)
    for (const auto& [c, d] : relation)
      worst = std::max(worst, std::abs(x.distance(a, c) - y.distance(b, d)));
  return worst;
}

GluedSpace glue_by_relation(const FiniteMMS& x, const FiniteMMS& y, const Relation& relation, double t,
                            double tol) {
  if (relation.empty()) throw Error("glue: empty relation");
  if (!(t >= 0.0)) throw Error("glue: negative bridge length");
  const std::size_t nx = x.size(), ny = y.size();
  for (const auto& [a, b] : relation)
    if (a >= nx || b >= ny) throw Error("glue: relation index out of range");

  GluedSpace out{x, y, Grid(nx, ny, std::numeric_limits<double>::infinity()), {}};
  for (const auto& [a, b] : relation) out.bridges.push_back({a, b, t});
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (const auto& [a, b] : relation)
        out.cross(i, j) = std::min(out.cross(i, j), x.distance(i, a) + t + y.distance(b, j));

  // Min-plus closure of the union; any shortened intra-distance means the
  // bridges are too short for the distortion of the relation.
  Grid g = out.full();
  const std::size_t n = nx + ny;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = std::min(g(i, j), g(i, k) + g(k, j));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const bool li = i < nx, lj = j < nx;
      if (li != lj) continue;
      const double orig = li ? x.distance(i, j) : y.distance(i - nx, j - nx);
      if (g(i, j) < orig - tol)
        throw NotIsometricError("not isometric: gluing shortens d(" + std::to_string(i) + "," +
                                std::to_string(j) + ") from " + std::to_string(orig) + " to " +
                                std::to_string(g(i, j)));
    }
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) out.cross(i, j) = g(i, nx + j);
  return out;
}

GhpStrategy parse_strategy(const std::string& name) {
  if (name == "permutation") return GhpStrategy::Permutation;
  if (name == "identify") return GhpStrategy::Identify;
  if (name == "net") return GhpStrategy::Net;
  if (name == "best") return GhpStrategy::Best;
  throw Error("unknown strategy '" + name + "'");
}

std::string to_string(GhpStrategy s) {
  switch (s) {
    case GhpStrategy::Permutation: return "permutation";
    case GhpStrategy::Identify: return "identify";
    case GhpStrategy::Net: return "net";
    case GhpStrategy::Best: return "best";
  }
  return "?";
}

namespace {

GhpBound bound_from_gluing(GluedSpace gluing, std::string method, double tol) {
  auto pr = prokhorov_distance(gluing.left.mass(), gluing.right.mass(), gluing.cross,
                               FlowArithmetic::Floating, tol);
  GhpBound b;
  b.upper = pr.value;
  b.coupling = std::move(pr.coupling);
  b.gluing = std::move(gluing);
  b.method = std::move(method);
  return b;
}

GhpBound mirrored(GhpBound b) {
  b.gluing = b.gluing.mirrored();
  b.coupling = b.coupling.transposed();
  return b;
}

bool uniform_mass(const FiniteMMS& s, double tol) {
  const double u = 1.0 / static_cast<double>(s.size());
  return std::all_of(s.mass().begin(), s.mass().end(), [&](double m) { return std::abs(m - u) <= tol; });
}

std::optional<GluedSpace> permutation_gluing(const FiniteMMS& x, const FiniteMMS& y, const GhpOptions& opt) {
  if (x.size() != y.size() || !uniform_mass(x, opt.tolerance) || !uniform_mass(y, opt.tolerance))
    return std::nullopt;
  PiOptions po = opt.pi;
  if (x.size() > po.exact_limit) po.mode = SearchMode::Heuristic;
  const auto pi = dpi_distance(x.dist().grid(), y.dist().grid(), po);

  std::vector<char> excluded(x.size(), 0);
  for (auto i : pi.inner.excluded) excluded[i] = 1;
  Relation rel;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!excluded[i]) rel.emplace_back(i, pi.permutation[i]);
  double t = pi.inner.max_residual / 2.0;
  if (rel.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) rel.emplace_back(i, pi.permutation[i]);
    t = relation_distortion(x, y, rel) / 2.0;
  }
  // Retained pairs differ by at most max_residual, so half of it per bridge
  // keeps every detour through the other space at least as long.
  return glue_by_relation(x, y, rel, t, opt.tolerance);
}

std::optional<GluedSpace> identify_gluing(const FiniteMMS& x, const FiniteMMS& y, const GhpOptions& opt,
                                          std::string* why) {
  std::map<std::string, std::size_t> where;
  for (std::size_t j = 0; j < y.size(); ++j) where.emplace(y.labels()[j], j);
  Relation rel;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (auto it = where.find(x.labels()[i]); it != where.end()) rel.emplace_back(i, it->second);
  if (rel.empty()) {
    if (why) *why = "identify: the spaces share no labels";
    return std::nullopt;
  }
  try {
    return glue_by_relation(x, y, rel, 0.0, opt.tolerance);
  } catch (const NotIsometricError& e) {
    if (why) *why = std::string("identify: shared labels do not span isometric subspaces (") + e.what() + ")";
    return std::nullopt;
  }
}

std::vector<Grid> wedge_bases(const FiniteMMS& x, const FiniteMMS& y, const GhpOptions& opt) {
  std::vector<Grid> out;
  for (std::size_t i = 0; i < x.size() && out.size() < opt.net_anchor_limit; ++i)
    for (std::size_t j = 0; j < y.size() && out.size() < opt.net_anchor_limit; ++j)
      out.push_back(glue_by_relation(x, y, {{i, j}}, 0.0, opt.tolerance).cross);
  return out;
}

// Scans epsilon over the distinct cross distances of each base gluing; every
// maximum epsilon-matching becomes a relation glued at half its distortion.
std::optional<GhpBound> net_bound(const FiniteMMS& x, const FiniteMMS& y, const std::vector<Grid>& bases,
                                  const GhpOptions& opt) {
  std::optional<GhpBound> best;
  std::set<Relation> seen;
  for (const auto& cross : bases) {
    std::vector<double> levels(cross.data());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double v : levels) {
      const auto m = epsilon_matching(cross, std::nextafter(v, std::numeric_limits<double>::infinity()));
      if (m.pairs.empty() || !seen.insert(m.pairs).second) continue;
      const double t = relation_distortion(x, y, m.pairs) / 2.0;
      auto b = bound_from_gluing(glue_by_relation(x, y, m.pairs, t, opt.tolerance), "net", opt.tolerance);
      if (!best || b.upper < best->upper) best = std::move(b);
    }
  }
  return best;
}

// One argument order. Returns nullopt (with a reason) when inapplicable.
std::optional<GhpBound> directed_bound(const FiniteMMS& x, const FiniteMMS& y, GhpStrategy strategy,
                                       const GhpOptions& opt, std::string* why) {
  const double tol = opt.tolerance;
  switch (strategy) {
    case GhpStrategy::Permutation: {
      auto g = permutation_gluing(x, y, opt);
      if (!g) {
        *why = "permutation: requires equal sizes and uniform masses";
        return std::nullopt;
      }
      return bound_from_gluing(std::move(*g), "permutation", tol);
    }
    case GhpStrategy::Identify: {
      auto g = identify_gluing(x, y, opt, why);
      if (!g) return std::nullopt;
      return bound_from_gluing(std::move(*g), "identify", tol);
    }
    case GhpStrategy::Net: {
      std::vector<Grid> bases;
      if (auto g = permutation_gluing(x, y, opt)) bases.push_back(g->cross);
      if (auto g = identify_gluing(x, y, opt, nullptr)) bases.push_back(g->cross);
      if (bases.empty()) bases = wedge_bases(x, y, opt);
      return net_bound(x, y, bases, opt);
    }
    case GhpStrategy::Best: {
      std::optional<GhpBound> best;
      for (auto s : {GhpStrategy::Permutation, GhpStrategy::Identify, GhpStrategy::Net}) {
        std::string ignored;
        auto b = directed_bound(x, y, s, opt, &ignored);
        if (b && (!best || b->upper < best->upper)) best = std::move(b);
      }
      return best;
    }
  }
  return std::nullopt;
}

}  // namespace

GhpBound ghp_upper_bound(const FiniteMMS& x, const FiniteMMS& y, GhpStrategy strategy, const GhpOptions& options) {
  std::string why;
  auto forward = directed_bound(x, y, strategy, options, &why);
  if (!forward) throw StrategyError(why.empty() ? "strategy not applicable" : why);
  auto backward = directed_bound(y, x, strategy, options, &why);
  if (backward && backward->upper < forward->upper) return mirrored(std::move(*backward));
  return std::move(*forward);
}

UniformGhpBound ghp_bounds_uniform(const DistanceMatrix& a, const DistanceMatrix& b, const GhpOptions& options) {
  if (a.size() != b.size()) throw Error("ghp_bounds_uniform: matrices differ in size");
  PiOptions po = options.pi;
  po.mode = SearchMode::Exact;
  UniformGhpBound out;
  out.pi = dpi_distance(a.grid(), b.grid(), po);
  out.bound = ghp_upper_bound(theta_map(a), theta_map(b), GhpStrategy::Best, options);
  out.bound.lower = out.pi.value / 2.0;
  return out;
}

}  // namespace mmspace
