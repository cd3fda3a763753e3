#pragma once

#include <span>
#include <vector>

#include "mmspace/core.hpp"

namespace mmspace {

/// sum over nu_i > 0 of nu_i log(nu_i / mu_i), natural log. Infinity when
/// nu_i > 0 while mu_i = 0.
double kl_divergence(std::span<const double> nu, std::span<const double> mu);

/// Injective maps Y -> X (map[i] = image of Y point i) with
/// |d_Y(i, j) - d_X(map[i], map[j])| <= tol, in lexicographic order.
struct EmbeddingSet {
  std::vector<std::vector<std::size_t>> maps;
};

EmbeddingSet find_isometric_embeddings(const FiniteMMS& y, const FiniteMMS& x, double tol = kDefaultTolerance);

struct RelativeEntropy {
  double value = 0.0;                 // infinity when no embedding exists
  std::vector<std::size_t> argmin;    // first minimizing embedding, empty if none
  std::size_t embeddings = 0;
};

/// I_X(Y): minimum over isometric embeddings of KL(pushforward of nu || mu).
RelativeEntropy relative_entropy(const FiniteMMS& y, const FiniteMMS& x, double tol = kDefaultTolerance);

}  // namespace mmspace
