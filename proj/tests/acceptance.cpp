// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mmspace/coupling.hpp"
#include "mmspace/entropy.hpp"
#include "mmspace/experiments.hpp"
#include "mmspace/ghp.hpp"
#include "mmspace/matmetric.hpp"
#include "mmspace/sampling.hpp"
#include "oracles.hpp"

using namespace mmspace;

namespace {

constexpr double kTau = 1e-9;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Grid line(const std::vector<double>& xs) {
  std::vector<std::vector<double>> p;
  for (double x : xs) p.push_back({x});
  return euclidean_distances(p);
}

Outcome dm_oracle() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    CounterRng rng(kSeed, t);
    const std::size_t n = 1 + rng.below(6);
    const Grid a = t % 2 ? gen::lattice_symmetric(n, rng) : gen::symmetric(n, rng);
    const Grid b = t % 2 ? gen::lattice_symmetric(n, rng) : gen::symmetric(n, rng);
    worst = std::max(worst, std::abs(dm_distance(a, b, kTau).value - oracle::dm(a, b)));
  }
  return {worst == 0.0, fmt("200 pairs, n<=6, max |dm - oracle| = %g", worst)};
}

Outcome dpi_oracle() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng(kSeed + 1, t);
    const std::size_t n = 1 + rng.below(6);
    const Grid a = t % 2 ? gen::lattice_symmetric(n, rng) : gen::distance_matrix(n, rng).grid();
    const Grid b = t % 2 ? gen::lattice_symmetric(n, rng) : gen::distance_matrix(n, rng).grid();
    worst = std::max(worst, std::abs(dpi_distance(a, b).value - oracle::dpi(a, b)));
  }
  return {worst == 0.0, fmt("100 pairs, n<=6, max |dpi - oracle| = %g", worst)};
}

Outcome quarter_pair() {
  const double e = 0.01;
  const std::vector<double> xs{-e, 0, e, 1}, ys{0, e, 1, 1 + e};
  const double dpi = dpi_distance(line(xs), line(ys)).value;
  double hausdorff = 0.0;
  for (const auto* pair : {&xs, &ys}) {
    const auto& from = *pair;
    const auto& to = pair == &xs ? ys : xs;
    for (double p : from) {
      double near = INFINITY;
      for (double q : to) near = std::min(near, std::abs(p - q));
      hausdorff = std::max(hausdorff, near);
    }
  }
  const bool ok = dpi == 0.25 && std::abs(hausdorff - e) <= 1e-12;
  return {ok, fmt("d_pi = %.17g (want 0.25), point-set Hausdorff gap = %.3g", dpi, hausdorff)};
}

Outcome prokhorov_oracle() {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng(kSeed + 2, t);
    const std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
    const auto p = gen::masses(r, rng, true), q = gen::masses(c, rng, true);
    Grid d(r, c);
    for (auto& x : d.values()) x = t % 2 ? rng.uniform() : double(rng.below(5)) / 8.0;
    worst = std::max(worst, std::abs(prokhorov_distance(p, q, d).value - oracle::prokhorov(p, q, d)));
  }
  const auto path = prokhorov_distance(std::vector<double>{0.5, 0.5, 0}, std::vector<double>{0, 0.5, 0.5},
                                       Grid::from_rows({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}));
  return {worst <= 1e-6 && path.value == 0.5,
          fmt("100 instances, max |dP - oracle| = %.3g (tol 1e-6); path example = %.17g", worst, path.value)};
}

Outcome birkhoff() {
  double worst = 0.0;
  std::size_t most = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng(kSeed + 3, t);
    const Grid s = gen::doubly_stochastic(5, 1 + rng.below(30), rng);
    const auto d = birkhoff_decompose(s);
    const Grid back = d.reconstruct(5);
    for (std::size_t k = 0; k < s.data().size(); ++k) worst = std::max(worst, std::abs(back.data()[k] - s.data()[k]));
    most = std::max(most, d.terms.size());
  }
  return {worst <= 1e-12 && most <= 17, fmt("100 grids 5x5, max error = %.3g, max terms = %zu", worst, most)};
}

Outcome sandwich() {
  ExperimentOptions o;
  o.seed = kSeed + 4;
  o.tolerance = kTau;
  const auto r = check_finspc_sandwich(5, 200, o);
  return {r.all_pass() && r.observed.at("violations") == 0.0,
          fmt("200 pairs in D(5), violations = %g, max(upper - dpi) = %.3g, max(dpi - 2 upper) = %.3g",
              r.observed.at("violations"), r.observed.at("max_upper_minus_dpi"),
              r.observed.at("max_dpi_minus_2upper"))};
}

Outcome hoelder() {
  bool ok = true;
  double worst_ratio = 0.0;
  for (double eps : {0.04, 0.1, 0.2})
    for (std::size_t n = 2; n <= 5; ++n) {
      const auto r = check_hoelder_small_n(eps, n);
      const double dp = r.observed.at("dP");
      ok = ok && r.all_pass() && dp <= std::sqrt(eps) + kTau;
      worst_ratio = std::max(worst_ratio, dp / std::sqrt(eps));
    }
  return {ok, fmt("12 cases, max dP / sqrt(eps) = %.6f", worst_ratio)};
}

Outcome sharp() {
  const auto big = check_sharp_exponent(1.0, 0.75, 0.01, 20);
  const double p = big.observed.at("p_matrix_nonzero");
  const double target = big.bound.at("c_eps_alpha");
  const auto small = check_sharp_exponent(1.0, 0.75, 0.05, 5);
  bool boundary = false;
  for (const auto& a : small.assertions) boundary = boundary || a.boundary;
  const bool ok = big.all_pass() && p >= 0.18 && p <= 0.19 && p > target && small.all_pass() &&
                  small.observed.count("dP_exact") == 1;
  return {ok, fmt("P(M!=0) = %.6f > C eps^a = %.6f; eps=0.05 N=5 exact dP = %.6f > %.6f%s", p, target,
                  small.observed.at("dP_exact"), small.bound.at("c_eps_alpha"), boundary ? " (boundary)" : "")};
}

Outcome sampconv() {
  ExperimentOptions o;
  o.seed = kSeed + 5;
  const auto r = check_sampling_convergence(unit_square_corners(), 0.1, 1000, 200, o);
  return {r.all_pass(), fmt("frequency = %.4f < 0.1, 95%% upper limit = %.4f (slack %.4f)",
                            r.observed.at("frequency"), r.observed.at("frequency_upper95"),
                            r.observed.at("slack95"))};
}

Outcome gpaction() {
  const double eps = 0.1;
  const auto r = check_group_invariance(two_point_space("a", "b", 0.5, eps), two_point_space("a", "d", 1.0, eps), 3);
  return {r.all_pass(), fmt("dP(d_M) = %.17g, dP(d_pi) = %.17g", r.observed.at("dP_ground_dM"),
                            r.observed.at("dP_ground_dpi"))};
}

Outcome kl_example() {
  const double p = 0.25;
  const double formula = std::log(2.0) + p * std::log(p) + (1 - p) * std::log(1 - p);
  const double kl = kl_divergence(std::vector<double>{p, 1 - p}, std::vector<double>{0.5, 0.5});
  const auto two = DistanceMatrix::from_grid(Grid::from_rows({{0, 1}, {1, 0}}));
  const auto re = relative_entropy(FiniteMMS(two, {p, 1 - p}), FiniteMMS(two, {0.5, 0.5}));
  const bool ok = std::abs(kl - formula) <= 1e-9 && std::abs(kl - 0.130812) <= 1e-6 &&
                  std::abs(re.value - formula) <= 1e-9 && re.embeddings == 2;
  return {ok, fmt("KL = %.9f, formula = %.9f, I_X(Y) = %.9f with %zu embeddings", kl, formula, re.value,
                  re.embeddings)};
}

Outcome properties() {
  std::size_t dm_bad = 0, dp_bad = 0, glue_bad = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    CounterRng rng(kSeed + 6, t);
    const std::size_t n = 1 + rng.below(6);
    const Grid a = gen::symmetric(n, rng), b = gen::symmetric(n, rng), c = gen::symmetric(n, rng);
    const double ab = dm_distance(a, b).value, bc = dm_distance(b, c).value, ac = dm_distance(a, c).value;
    if (dm_distance(a, a).value != 0.0 || ab != dm_distance(b, a).value || ac > ab + bc + kTau) ++dm_bad;
  }
  CounterRng ground_rng(kSeed + 7);
  const Grid ground = gen::distance_matrix(5, ground_rng).grid();
  for (std::uint64_t t = 0; t < 500; ++t) {
    CounterRng rng(kSeed + 8, t);
    const auto p = gen::masses(5, rng, true), q = gen::masses(5, rng, true), r = gen::masses(5, rng, true);
    if (prokhorov_distance(p, r, ground).value >
        prokhorov_distance(p, q, ground).value + prokhorov_distance(q, r, ground).value + kTau)
      ++dp_bad;
  }
  for (std::uint64_t t = 0; t < 500; ++t) {
    CounterRng rng(kSeed + 9, t);
    const auto x = gen::space(1 + rng.below(6), rng), y = gen::space(1 + rng.below(6), rng);
    Relation rel;
    for (std::size_t k = 1 + rng.below(6); k > 0; --k) rel.emplace_back(rng.below(x.size()), rng.below(y.size()));
    const auto g = glue_by_relation(x, y, rel, relation_distortion(x, y, rel) / 2.0);
    const Grid full = g.full();
    bool ok = validate_distance_matrix(full, kTau).ok();
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) ok = ok && full(i, j) == x.distance(i, j);
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j) ok = ok && full(x.size() + i, x.size() + j) == y.distance(i, j);
    if (!ok) ++glue_bad;
  }
  auto run = [] {
    ExperimentOptions o;
    o.seed = 77;
    std::string bytes = check_sampling_convergence(unit_square_corners(), 0.1, 200, 20, o).to_json().dump();
    bytes += check_finspc_sandwich(4, 10, o).to_csv();
    const auto s = empirical_space(CircleModel{1.0}, 16, 77, 3);
    bytes.append(reinterpret_cast<const char*>(s.dist().grid().data().data()),
                 s.dist().grid().data().size() * sizeof(double));
    return bytes;
  };
  const bool same = run() == run();
  return {dm_bad == 0 && dp_bad == 0 && glue_bad == 0 && same,
          fmt("d_M axioms %zu/1000 bad, d_P triangle %zu/500 bad, gluing isometry %zu/500 bad, determinism %s",
              dm_bad, dp_bad, glue_bad, same ? "byte-equal" : "DIFFERS")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "d_M oracle equivalence", 10, dm_oracle},
      {2, "d_pi oracle equivalence", 30, dpi_oracle},
      {3, "quarter pair", 0, quarter_pair},
      {4, "d_P oracle equivalence", 0, prokhorov_oracle},
      {5, "Birkhoff decomposition", 0, birkhoff},
      {6, "uniform sandwich", 0, sandwich},
      {7, "Hoelder-1/2 bound", 60, hoelder},
      {8, "sharp exponent", 0, sharp},
      {9, "sampling convergence", 60, sampconv},
      {10, "group invariance", 0, gpaction},
      {11, "KL example", 0, kl_example},
      {12, "property suites", 0, properties},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool timely = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.pass && timely;
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %-26s %s [%.2fs%s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs, c.limit_s > 0 ? fmt(", limit %gs", c.limit_s).c_str() : "");
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
