#include "mmspace/entropy.hpp"

#include <cmath>
#include <limits>

namespace mmspace {

double kl_divergence(std::span<const double> nu, std::span<const double> mu) {
  if (nu.size() != mu.size()) throw Error("kl_divergence: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] <= 0.0) continue;
    if (mu[i] <= 0.0) return std::numeric_limits<double>::infinity();
    s += nu[i] * std::log(nu[i] / mu[i]);
  }
  return s;
}

EmbeddingSet find_isometric_embeddings(const FiniteMMS& y, const FiniteMMS& x, double tol) {
  EmbeddingSet out;
  const std::size_t ny = y.size(), nx = x.size();
  if (ny > nx) return out;
  std::vector<std::size_t> map(ny);
  std::vector<char> used(nx, 0);
  auto extend = [&](auto&& self, std::size_t i) -> void {
    if (i == ny) {
      out.maps.push_back(map);
      return;
    }
    for (std::size_t c = 0; c < nx; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = std::abs(y.distance(i, j) - x.distance(c, map[j])) <= tol;
      if (!ok) continue;
      map[i] = c;
      used[c] = 1;
      self(self, i + 1);
      used[c] = 0;
    }
  };
  extend(extend, 0);
  return out;
}

RelativeEntropy relative_entropy(const FiniteMMS& y, const FiniteMMS& x, double tol) {
  RelativeEntropy out;
  out.value = std::numeric_limits<double>::infinity();
  const auto emb = find_isometric_embeddings(y, x, tol);
  out.embeddings = emb.maps.size();
  std::vector<double> pushed(x.size());
  for (const auto& m : emb.maps) {
    std::fill(pushed.begin(), pushed.end(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) pushed[m[i]] += y.mass()[i];
    const double v = kl_divergence(pushed, x.mass());
    if (out.argmin.empty() || v < out.value) {
      out.value = v;
      out.argmin = m;
    }
  }
  return out;
}

}  // namespace mmspace
