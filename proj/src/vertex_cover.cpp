#include "mmspace/vertex_cover.hpp"

#include <algorithm>

namespace mmspace {

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) {
    forced_[u] = true;
    return;
  }
  if (std::find(adj_[u].begin(), adj_[u].end(), v) != adj_[u].end()) return;
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  ++edges_;
}

namespace {

class CoverSearch {
 public:
  CoverSearch(const Graph& g, std::size_t bound) : g_(g), best_size_(bound) {}

  // Finds a cover strictly smaller than the initial bound, if any.
  std::optional<std::vector<std::size_t>> run() {
    const std::size_t n = g_.size();
    std::vector<char> alive(n, 1);
    std::vector<int> deg(n);
    for (std::size_t v = 0; v < n; ++v) deg[v] = static_cast<int>(g_.neighbors(v).size());
    for (std::size_t v = 0; v < n; ++v)
      if (g_.forced(v)) take(v, alive, deg);
    recurse(std::move(alive), std::move(deg));
    if (!found_) return std::nullopt;
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  void take(std::size_t v, std::vector<char>& alive, std::vector<int>& deg) {
    alive[v] = 0;
    chosen_.push_back(v);
    for (auto u : g_.neighbors(v))
      if (alive[u]) --deg[u];
  }

  static void drop(std::size_t v, std::vector<char>& alive) { alive[v] = 0; }

  std::size_t matching_bound(const std::vector<char>& alive) const {
    std::vector<char> used(alive.size(), 0);
    std::size_t m = 0;
    for (std::size_t v = 0; v < alive.size(); ++v) {
      if (!alive[v] || used[v]) continue;
      for (auto u : g_.neighbors(v)) {
        if (alive[u] && !used[u]) {
          used[u] = used[v] = 1;
          ++m;
          break;
        }
      }
    }
    return m;
  }

  void recurse(std::vector<char> alive, std::vector<int> deg) {
    const std::size_t mark = chosen_.size();
    const std::size_t n = alive.size();

    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        if (deg[v] == 0) {
          drop(v, alive);
          changed = true;
        } else if (deg[v] == 1) {
          for (auto u : g_.neighbors(v))
            if (alive[u]) {
              take(u, alive, deg);
              break;
            }
          changed = true;
        }
      }
      if (chosen_.size() >= best_size_) {
        chosen_.resize(mark);
        return;
      }
    }

    std::size_t pivot = n;
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && (pivot == n || deg[v] > deg[pivot])) pivot = v;

    if (pivot == n) {
      best_ = chosen_;
      best_size_ = chosen_.size();
      found_ = true;
      chosen_.resize(mark);
      return;
    }

    if (chosen_.size() + matching_bound(alive) >= best_size_) {
      chosen_.resize(mark);
      return;
    }

    {
      auto a = alive;
      auto d = deg;
      take(pivot, a, d);
      recurse(std::move(a), std::move(d));
      chosen_.pop_back();
    }

    if (chosen_.size() + static_cast<std::size_t>(deg[pivot]) < best_size_) {
      const std::size_t before = chosen_.size();
      for (auto u : g_.neighbors(pivot))
        if (alive[u]) take(u, alive, deg);
      drop(pivot, alive);
      recurse(std::move(alive), std::move(deg));
      chosen_.resize(before);
    }
    chosen_.resize(mark);
  }

  const Graph& g_;
  std::size_t best_size_;
  bool found_ = false;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
};

}  // namespace

std::optional<std::vector<std::size_t>> min_vertex_cover(const Graph& g, std::size_t budget) {
  return CoverSearch(g, budget + 1).run();
}

std::vector<std::size_t> min_vertex_cover(const Graph& g) {
  return *CoverSearch(g, g.size() + 1).run();
}

}  // namespace mmspace
