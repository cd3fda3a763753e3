#include "mmspace/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mmspace/io.hpp"

namespace mmspace {

std::vector<double> cumulative(std::span<const double> mass) {
  std::vector<double> cdf(mass.size());
  double s = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) cdf[i] = (s += mass[i]);
  // The last positive atom absorbs rounding so every u in [0, 1) lands somewhere.
  for (std::size_t i = mass.size(); i-- > 0;) {
    if (mass[i] > 0.0) {
      for (std::size_t k = i; k < mass.size(); ++k) cdf[k] = 1.0;
      break;
    }
  }
  return cdf;
}

std::size_t draw_categorical(std::span<const double> cdf, CounterRng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), std::ssize(cdf) - 1));
}

ModelSpace model_from_json(const nlohmann::json& j, double tol) {
  const std::string kind = j.value("kind", std::string("finite"));
  if (kind == "finite") return FiniteModel{io::mms_from_json(j, tol)};
  if (kind == "circle") return CircleModel{j.value("circumference", 1.0)};
  if (kind == "interval") return IntervalModel{};
  if (kind == "euclidean") {
    EuclideanModel m;
    m.coords = j.at("coords").get<std::vector<std::vector<double>>>();
    m.mass = j.contains("mass") ? j.at("mass").get<std::vector<double>>()
                                : std::vector<double>(m.coords.size(), 1.0 / static_cast<double>(m.coords.size()));
    return m;
  }
  throw Error("unknown model kind '" + kind + "'");
}

FiniteMMS as_finite(const ModelSpace& space) {
  if (const auto* f = std::get_if<FiniteModel>(&space)) return f->space;
  if (const auto* e = std::get_if<EuclideanModel>(&space))
    return FiniteMMS(DistanceMatrix::from_grid(euclidean_distances(e->coords)), e->mass);
  throw Error("model space is not finitely supported");
}

std::vector<std::size_t> sample_indices(std::span<const double> mass, std::size_t n, CounterRng& rng) {
  const auto cdf = cumulative(mass);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = draw_categorical(cdf, rng);
  return out;
}

namespace {

FiniteMMS from_sample(const FiniteMMS& base, const std::vector<std::size_t>& idx) {
  const std::size_t n = idx.size();
  Grid d(n, n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = base.labels()[idx[i]];
    for (std::size_t j = 0; j < n; ++j) d(i, j) = base.distance(idx[i], idx[j]);
  }
  return FiniteMMS(std::move(labels), DistanceMatrix::from_grid(d),
                   std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

template <class Metric>
FiniteMMS from_reals(const std::vector<double>& pts, Metric metric) {
  const std::size_t n = pts.size();
  Grid d(n, n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = std::to_string(pts[i]);
    for (std::size_t j = 0; j < n; ++j) d(i, j) = i == j ? 0.0 : metric(pts[i], pts[j]);
  }
  return FiniteMMS(std::move(labels), DistanceMatrix::from_grid(d),
                   std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

}  // namespace

FiniteMMS empirical_space(const ModelSpace& space, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  if (n == 0) throw Error("empirical_space: N must be at least 1");
  CounterRng rng(seed, stream);
  if (const auto* c = std::get_if<CircleModel>(&space)) {
    const double len = c->circumference;
    std::vector<double> pts(n);
    for (auto& p : pts) p = rng.uniform() * len;
    return from_reals(pts, [len](double a, double b) {
      const double t = std::abs(a - b);
      return std::min(t, len - t);
    });
  }
  if (std::holds_alternative<IntervalModel>(space)) {
    std::vector<double> pts(n);
    for (auto& p : pts) p = rng.uniform();
    return from_reals(pts, [](double a, double b) { return std::abs(a - b); });
  }
  const FiniteMMS base = as_finite(space);
  return from_sample(base, sample_indices(base.mass(), n, rng));
}

MatrixEnsemble enumerate_matrix_ensemble(const FiniteMMS& space, std::size_t n, std::uint64_t budget) {
  if (n == 0) throw Error("ensemble: N must be at least 1");
  const std::size_t k = space.size();
  double count = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (count > static_cast<double>(budget))
    throw Error("ensemble: " + std::to_string(k) + "^" + std::to_string(n) + " tuples exceed budget " +
                std::to_string(budget));

  std::map<std::vector<double>, double> merged;
  std::vector<std::size_t> tuple(n, 0);
  std::vector<double> entries(n * n);
  for (;;) {
    double prob = 1.0;
    for (auto t : tuple) prob *= space.mass()[t];
    if (prob > 0.0) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = space.distance(tuple[i], tuple[j]);
      merged[entries] += prob;
    }
    std::size_t pos = n;
    while (pos > 0 && ++tuple[pos - 1] == k) tuple[--pos] = 0;
    if (pos == 0) break;
  }

  std::vector<EnsembleAtom> atoms;
  atoms.reserve(merged.size());
  for (const auto& [e, p] : merged) {
    Grid g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = e[i * n + j];
    atoms.push_back({DistanceMatrix::from_grid(g), p});
  }
  return MatrixEnsemble(std::move(atoms));
}

NetPartition epsilon_net_partition(const FiniteMMS& space, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon net: epsilon must be positive");
  NetPartition net;
  net.epsilon = epsilon;
  const std::size_t n = space.size();
  for (std::size_t p = 0; p < n; ++p) {
    const bool covered = std::any_of(net.centers.begin(), net.centers.end(),
                                     [&](std::size_t c) { return space.distance(p, c) <= epsilon; });
    if (!covered) net.centers.push_back(p);
  }
  net.assignment.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < net.centers.size(); ++c)
      if (space.distance(p, net.centers[c]) < space.distance(p, net.centers[best])) best = c;
    net.assignment[p] = best;
  }
  return net;
}

std::vector<double> push_forward(const NetPartition& net, std::span<const double> mass) {
  if (mass.size() != net.assignment.size()) throw Error("push_forward: size mismatch");
  std::vector<double> out(net.centers.size(), 0.0);
  for (std::size_t p = 0; p < mass.size(); ++p) out[net.assignment[p]] += mass[p];
  return out;
}

HatSpace hat_space(const FiniteMMS& space, const NetPartition& net) {
  if (net.assignment.size() != space.size()) throw Error("hat_space: net was built for another space");
  const std::size_t m = net.centers.size(), n = space.size();
  Grid d(m, m);
  std::vector<std::string> labels(m);
  for (std::size_t a = 0; a < m; ++a) {
    labels[a] = space.labels()[net.centers[a]];
    for (std::size_t b = 0; b < m; ++b) d(a, b) = space.distance(net.centers[a], net.centers[b]);
  }
  HatSpace out{FiniteMMS(std::move(labels), DistanceMatrix::from_grid(d), push_forward(net, space.mass())),
               {Grid(m, n), Grid(m, n)}};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t p = 0; p < n; ++p) out.witness.ground(a, p) = space.distance(net.centers[a], p);
  for (std::size_t p = 0; p < n; ++p) out.witness.mass(net.assignment[p], p) = space.mass()[p];
  return out;
}

}  // namespace mmspace
