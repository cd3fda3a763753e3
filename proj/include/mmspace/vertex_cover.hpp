#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace mmspace {

/// Undirected simple graph. A self-loop marks a vertex every cover must contain.
class Graph {
 public:
  explicit Graph(std::size_t n) : adj_(n), forced_(n, false) {}

  void add_edge(std::size_t u, std::size_t v);

  std::size_t size() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }
  bool forced(std::size_t v) const { return forced_[v]; }

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<bool> forced_;
  std::size_t edges_ = 0;
};

/// Exact minimum vertex cover by branch and bound (degree-0/1 reductions,
/// max-degree branching, maximal-matching lower bound). Returns a minimum
/// cover, sorted, if one of size <= budget exists.
std::optional<std::vector<std::size_t>> min_vertex_cover(const Graph& g, std::size_t budget);
std::vector<std::size_t> min_vertex_cover(const Graph& g);

}  // namespace mmspace
