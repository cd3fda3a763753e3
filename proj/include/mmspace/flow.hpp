#pragma once

#include <cstddef>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

namespace mmspace {

/// Max-flow on the transport network source -> rows -> cols -> sink, with
/// row supplies and column demands as capacities and uncapacitated row/col
/// edges added incrementally. Dinic's algorithm; residual capacities at or
/// below `zero` are treated as saturated, so Scalar may be floating or exact.
template <class Scalar>
class TransportFlow {
 public:
  TransportFlow(const std::vector<Scalar>& supply, const std::vector<Scalar>& demand, Scalar zero)
      : rows_(supply.size()), cols_(demand.size()), zero_(zero), graph_(rows_ + cols_ + 2) {
    for (std::size_t i = 0; i < rows_; ++i) add_arc(source(), row_node(i), supply[i]);
    for (std::size_t j = 0; j < cols_; ++j) add_arc(col_node(j), sink(), demand[j]);
    row_cap_ = supply;
  }

  /// Opens pair (i, j); capacity is the row supply, which never binds.
  void allow(std::size_t i, std::size_t j) {
    pairs_.push_back({i, j, graph_[row_node(i)].size()});
    add_arc(row_node(i), col_node(j), row_cap_[i]);
  }

  /// Augments to a maximum flow on the currently allowed pairs.
  Scalar augment() {
    while (bfs()) {
      iter_.assign(graph_.size(), 0);
      for (;;) {
        Scalar pushed = push(source(), Scalar(-1));
        if (!(pushed > zero_)) break;
        total_ += pushed;
      }
    }
    return total_;
  }

  Scalar value() const { return total_; }

  /// (row, col, flow) for every allowed pair with positive flow.
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> pair_flows() const {
    std::vector<std::tuple<std::size_t, std::size_t, Scalar>> out;
    for (const auto& p : pairs_) {
      const Arc& a = graph_[row_node(p.row)][p.slot];
      const Scalar f = row_cap_[p.row] - a.cap;
      if (f > zero_) out.emplace_back(p.row, p.col, f);
    }
    return out;
  }

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    Scalar cap;
  };
  struct Pair {
    std::size_t row, col, slot;
  };

  std::size_t source() const { return 0; }
  std::size_t sink() const { return rows_ + cols_ + 1; }
  std::size_t row_node(std::size_t i) const { return 1 + i; }
  std::size_t col_node(std::size_t j) const { return 1 + rows_ + j; }

  void add_arc(std::size_t u, std::size_t v, Scalar cap) {
    graph_[u].push_back({v, graph_[v].size(), cap});
    graph_[v].push_back({u, graph_[u].size() - 1, Scalar(0)});
  }

  bool bfs() {
    level_.assign(graph_.size(), -1);
    std::queue<std::size_t> q;
    level_[source()] = 0;
    q.push(source());
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (const auto& a : graph_[u])
        if (a.cap > zero_ && level_[a.to] < 0) {
          level_[a.to] = level_[u] + 1;
          q.push(a.to);
        }
    }
    return level_[sink()] >= 0;
  }

  // limit < 0 stands for "unbounded" at the source.
  Scalar push(std::size_t u, Scalar limit) {
    if (u == sink()) return limit;
    for (auto& i = iter_[u]; i < graph_[u].size(); ++i) {
      Arc& a = graph_[u][i];
      if (!(a.cap > zero_) || level_[a.to] != level_[u] + 1) continue;
      const Scalar room = (limit < Scalar(0) || a.cap < limit) ? a.cap : limit;
      const Scalar got = push(a.to, room);
      if (got > zero_) {
        a.cap -= got;
        graph_[a.to][a.rev].cap += got;
        return got;
      }
    }
    return Scalar(0);
  }

  std::size_t rows_, cols_;
  Scalar zero_;
  std::vector<std::vector<Arc>> graph_;
  std::vector<Scalar> row_cap_;
  std::vector<Pair> pairs_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  Scalar total_ = Scalar(0);
};

}  // namespace mmspace
