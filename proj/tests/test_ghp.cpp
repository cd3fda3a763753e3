#include <gtest/gtest.h>

#include "mmspace/coupling.hpp"
#include "mmspace/ghp.hpp"
#include "oracles.hpp"

using namespace mmspace;

namespace {

FiniteMMS two_point(const std::string& a, const std::string& b, double d, double eps) {
  return FiniteMMS({a, b}, DistanceMatrix::from_grid(Grid::from_rows({{0, d}, {d, 0}})), {1 - eps, eps});
}

FiniteMMS line_space(const std::vector<double>& xs) {
  std::vector<std::vector<double>> p;
  for (double x : xs) p.push_back({x});
  return theta_map(DistanceMatrix::from_grid(euclidean_distances(p)));
}

// Full pseudo-metric check plus exact restriction to both factors.
void expect_valid_gluing(const GluedSpace& g) {
  const Grid full = g.full();
  EXPECT_TRUE(validate_distance_matrix(full, 1e-9).ok());
  const std::size_t nx = g.left.size();
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j) EXPECT_EQ(full(i, j), g.left.distance(i, j));
  for (std::size_t i = 0; i < g.right.size(); ++i)
    for (std::size_t j = 0; j < g.right.size(); ++j) EXPECT_EQ(full(nx + i, nx + j), g.right.distance(i, j));
}

void expect_certified(const GhpBound& b) {
  expect_valid_gluing(b.gluing);
  EXPECT_EQ(b.coupling.ground, b.gluing.cross);
  EXPECT_TRUE(b.coupling.has_marginals(b.gluing.left.mass(), b.gluing.right.mass()));
  EXPECT_NEAR(delta_of_coupling(b.coupling), b.upper, 1e-9);
  EXPECT_LE(b.lower, b.upper + 1e-9);
}

}  // namespace

TEST(Glue, SinglePoints) {
  const FiniteMMS p(DistanceMatrix::zero(1), {1.0});
  const auto g = glue_by_relation(p, p, {{0, 0}}, 0.2);
  EXPECT_DOUBLE_EQ(g.cross(0, 0), 0.2);
  ASSERT_EQ(g.bridges.size(), 1u);
  EXPECT_EQ(g.bridges[0].length, 0.2);
}

TEST(Glue, BridgeLengthAgainstDistortion) {
  const auto x = two_point("x1", "x2", 1.0, 0.5), y = two_point("y1", "y2", 1.5, 0.5);
  const Relation r{{0, 0}, {1, 1}};
  const auto g = glue_by_relation(x, y, r, 0.5);
  expect_valid_gluing(g);
  EXPECT_DOUBLE_EQ(g.cross(0, 1), 1.5);
  EXPECT_THROW(glue_by_relation(x, y, r, 0.0), NotIsometricError);
  EXPECT_THROW(glue_by_relation(x, y, {}, 0.5), Error);
  EXPECT_THROW(glue_by_relation(x, y, r, -1.0), Error);
}

TEST(GlueProperty, HalfDistortionPreservesIsometry) {
  for (std::uint64_t t = 0; t < 300; ++t) {
    CounterRng rng(109, t);
    const auto x = gen::space(1 + rng.below(6), rng), y = gen::space(1 + rng.below(6), rng);
    Relation r;
    const std::size_t k = 1 + rng.below(6);
    for (std::size_t s = 0; s < k; ++s) r.emplace_back(rng.below(x.size()), rng.below(y.size()));
    const auto g = glue_by_relation(x, y, r, relation_distortion(x, y, r) / 2.0);
    expect_valid_gluing(g);
    for (const auto& [a, b] : r) EXPECT_LE(g.cross(a, b), relation_distortion(x, y, r) / 2.0 + 1e-12);
  }
}

TEST(Ghp, IdenticalSpacesIdentify) {
  CounterRng rng(113);
  const auto x = gen::space(5, rng);
  const auto b = ghp_upper_bound(x, x, GhpStrategy::Identify);
  EXPECT_EQ(b.upper, 0.0);
  EXPECT_EQ(b.method, "identify");
  expect_certified(b);
}

TEST(Ghp, SharpPairIdentifyGivesEpsilon) {
  for (double eps : {0.01, 0.05, 0.1}) {
    const auto x = two_point("a", "b", 2.0, eps), y = two_point("a", "d", 4.0, eps);
    const auto b = ghp_upper_bound(x, y, GhpStrategy::Identify);
    EXPECT_NEAR(b.upper, eps, 1e-12);
    expect_certified(b);
  }
}

TEST(Ghp, PermutationOnLineMatrices) {
  const auto b = ghp_upper_bound(line_space({0, 1, 3}), line_space({0, 2, 3}), GhpStrategy::Permutation);
  EXPECT_EQ(b.upper, 0.0);
  expect_certified(b);
}

TEST(Ghp, StrategyErrors) {
  const auto x = two_point("a", "b", 1.0, 0.3), y = two_point("c", "d", 1.0, 0.3);
  EXPECT_THROW(ghp_upper_bound(x, y, GhpStrategy::Permutation), StrategyError);
  EXPECT_THROW(ghp_upper_bound(x, y, GhpStrategy::Identify), StrategyError);
  EXPECT_NO_THROW(ghp_upper_bound(x, y, GhpStrategy::Net));
  EXPECT_THROW(parse_strategy("nope"), Error);
  EXPECT_EQ(parse_strategy(to_string(GhpStrategy::Net)), GhpStrategy::Net);
}

TEST(Ghp, UniformBounds) {
  CounterRng rng(127);
  const auto a = gen::distance_matrix(4, rng);
  const auto same = ghp_bounds_uniform(a, a);
  EXPECT_EQ(same.bound.lower, 0.0);
  EXPECT_EQ(same.bound.upper, 0.0);

  const double e = 0.01;
  const auto x = line_space({-e, 0, e, 1}), y = line_space({0, e, 1, 1 + e});
  const auto q = ghp_bounds_uniform(x.dist(), y.dist());
  EXPECT_DOUBLE_EQ(q.pi.value, 0.25);
  EXPECT_DOUBLE_EQ(q.bound.lower, 0.125);
  EXPECT_LE(q.bound.upper, 0.25 + 1e-12);
  expect_certified(q.bound);
}

TEST(GhpProperty, SandwichOnRandomMatrices) {
  for (std::uint64_t t = 0; t < 60; ++t) {
    CounterRng rng(131, t);
    const std::size_t n = 1 + rng.below(5);
    const auto a = gen::distance_matrix(n, rng), b = gen::distance_matrix(n, rng);
    const auto r = ghp_bounds_uniform(a, b);
    EXPECT_LE(r.bound.upper, r.pi.value + 1e-9);
    EXPECT_LE(r.pi.value, 2.0 * r.bound.upper + 1e-9);
    expect_certified(r.bound);
  }
}

TEST(GhpProperty, WitnessesAndSymmetry) {
  for (std::uint64_t t = 0; t < 60; ++t) {
    CounterRng rng(137, t);
    const auto x = gen::space(1 + rng.below(5), rng), y = gen::space(1 + rng.below(5), rng);
    const auto xy = ghp_upper_bound(x, y), yx = ghp_upper_bound(y, x);
    expect_certified(xy);
    expect_certified(yx);
    EXPECT_NEAR(xy.upper, yx.upper, 1e-9);
    EXPECT_LE(xy.upper, 1.0);
  }
}

TEST(GhpProperty, RelabeledCopyCollapses) {
  for (std::uint64_t t = 0; t < 60; ++t) {
    CounterRng rng(139, t);
    const std::size_t n = 1 + rng.below(6);
    const auto x = gen::space(n, rng);
    const auto p = gen::permutation(n, rng);
    Grid d(n, n);
    std::vector<std::string> labels(n);
    std::vector<double> mass(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = x.labels()[p[i]];
      mass[i] = x.mass()[p[i]];
      for (std::size_t j = 0; j < n; ++j) d(i, j) = x.distance(p[i], p[j]);
    }
    const FiniteMMS y(labels, DistanceMatrix::from_grid(d), mass);
    EXPECT_EQ(ghp_upper_bound(x, y).upper, 0.0);

    const auto tx = theta_map(x.dist()), ty = theta_map(y.dist());
    const auto u = ghp_bounds_uniform(tx.dist(), ty.dist());
    EXPECT_EQ(u.bound.lower, 0.0);
    EXPECT_EQ(u.bound.upper, 0.0);
  }
}
