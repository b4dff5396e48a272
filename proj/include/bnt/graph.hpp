#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bnt/bitset.hpp"
#include "bnt/errors.hpp"

namespace bnt {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Reduced fraction with non-negative denominator. Carries exact average
/// degrees so downstream rounding rules stay explicit.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Ratio make(std::int64_t n, std::int64_t d) {
    std::int64_t g = std::gcd(n, d);
    if (g == 0) g = 1;
    return Ratio{n / g, d / g};
  }
  double value() const { return double(num) / double(den); }
  /// Round half away from zero.
  std::int64_t rounded() const { return (2 * num + den) / (2 * den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Graph over dense node ids 0..n-1, directed or undirected, no self-loops,
/// no duplicate edges. For undirected graphs (u,v) and (v,u) are the same
/// edge and the stored form is (min,max). Instances are treated as immutable
/// once built; every algorithm below is read-only and safe for concurrent
/// use.
class Graph {
 public:
  Graph(std::size_t node_count, bool directed)
      : n_(node_count),
        directed_(directed),
        out_(node_count),
        in_(directed ? node_count : 0) {}

  static Graph directed(std::size_t n) { return Graph(n, true); }
  static Graph undirected(std::size_t n) { return Graph(n, false); }

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool is_directed() const { return directed_; }

  /// Adds an edge; returns false if it is already present.
  bool add_edge(NodeId u, NodeId v) {
    check_node(u);
    check_node(v);
    if (u == v) throw DomainError("self-loop edges are not allowed");
    Edge e = directed_ ? Edge{u, v} : Edge{std::min(u, v), std::max(u, v)};
    auto pos = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (pos != edges_.end() && *pos == e) return false;
    edges_.insert(pos, e);
    insert_sorted(out_[e.first], e.second);
    if (directed_) {
      insert_sorted(in_[e.second], e.first);
    } else {
      insert_sorted(out_[e.second], e.first);
    }
    return true;
  }

  bool has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    if (u == v) return false;
    Edge e = directed_ ? Edge{u, v} : Edge{std::min(u, v), std::max(u, v)};
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  /// Edges in canonical sorted order.
  const std::vector<Edge>& edges() const { return edges_; }

  /// Out-neighbours for directed graphs, all neighbours for undirected.
  const std::vector<NodeId>& out_neighbors(NodeId u) const {
    check_node(u);
    return out_[u];
  }
  const std::vector<NodeId>& in_neighbors(NodeId u) const {
    check_node(u);
    if (!directed_) return out_[u];
    return in_[u];
  }

  std::size_t out_degree(NodeId u) const { return out_neighbors(u).size(); }
  std::size_t in_degree(NodeId u) const { return in_neighbors(u).size(); }
  /// Undirected degree; for directed graphs the total in+out degree.
  std::size_t degree(NodeId u) const {
    return directed_ ? out_degree(u) + in_degree(u) : out_degree(u);
  }

  void set_label(NodeId u, std::string label) {
    check_node(u);
    if (labels_.empty()) labels_.resize(n_);
    labels_[u] = std::move(label);
  }
  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(NodeId u) const {
    static const std::string empty;
    check_node(u);
    return labels_.empty() ? empty : labels_[u];
  }

 private:
  void check_node(NodeId u) const {
    if (u >= n_) throw DomainError("node id out of range");
  }
  static void insert_sorted(std::vector<NodeId>& v, NodeId x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }

  std::size_t n_;
  bool directed_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;  // directed only
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
};

enum class Direction { In, Out, Undirected };

/// N(u), N_i(u) or N_o(u). The direction argument must agree with the
/// directedness of the graph.
inline const std::vector<NodeId>& neighbors(const Graph& g, NodeId u,
                                            Direction dir) {
  if (g.is_directed()) {
    switch (dir) {
      case Direction::In:
        return g.in_neighbors(u);
      case Direction::Out:
        return g.out_neighbors(u);
      case Direction::Undirected:
        throw DomainError("undirected neighbor query on a directed graph");
    }
  }
  if (dir != Direction::Undirected)
    throw DomainError("in/out neighbor query on an undirected graph");
  return g.out_neighbors(u);
}

struct DirectedDegreeStats {
  std::size_t delta_in_min = 0, delta_in_max = 0;
  std::size_t delta_out_min = 0, delta_out_max = 0;
};

struct DegreeStats {
  std::size_t delta_min = 0;
  std::size_t delta_max = 0;
  Ratio average_degree;
  std::optional<DirectedDegreeStats> directed;
};

inline DegreeStats degree_stats(const Graph& g) {
  if (g.node_count() == 0) throw DomainError("degree_stats on empty graph");
  DegreeStats s;
  s.delta_min = SIZE_MAX;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    std::size_t d = g.degree(u);
    s.delta_min = std::min(s.delta_min, d);
    s.delta_max = std::max(s.delta_max, d);
  }
  s.average_degree = Ratio::make(2 * std::int64_t(g.edge_count()),
                                 std::int64_t(g.node_count()));
  if (g.is_directed()) {
    DirectedDegreeStats d;
    d.delta_in_min = d.delta_out_min = SIZE_MAX;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      d.delta_in_min = std::min(d.delta_in_min, g.in_degree(u));
      d.delta_in_max = std::max(d.delta_in_max, g.in_degree(u));
      d.delta_out_min = std::min(d.delta_out_min, g.out_degree(u));
      d.delta_out_max = std::max(d.delta_out_max, g.out_degree(u));
    }
    s.directed = d;
  }
  return s;
}

enum class Reach { Forward, Backward };

/// Nodes reachable from u (Forward) or reaching u (Backward) once the
/// forbidden nodes are deleted from the graph. Contains u itself. For
/// undirected graphs both directions coincide.
inline Bitset reachable_set(const Graph& g, NodeId u, const Bitset& forbidden,
                            Reach dir) {
  if (forbidden.test(u)) throw DomainError("reachable_set: u is forbidden");
  Bitset seen(g.node_count());
  std::vector<NodeId> stack{u};
  seen.set(u);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    const auto& next = g.is_directed()
                           ? (dir == Reach::Forward ? g.out_neighbors(v)
                                                    : g.in_neighbors(v))
                           : g.out_neighbors(v);
    for (NodeId w : next) {
      if (!seen.test(w) && !forbidden.test(w)) {
        seen.set(w);
        stack.push_back(w);
      }
    }
  }
  return seen;
}

inline Bitset reachable_set(const Graph& g, NodeId u, Reach dir) {
  return reachable_set(g, u, Bitset(g.node_count()), dir);
}

/// Line-free: every node is linked to at least two other nodes. Defined for
/// undirected topologies; directed trees use the rooted variant in the
/// topology module.
inline bool is_line_free(const Graph& g) {
  if (g.is_directed())
    throw DomainError("is_line_free expects an undirected graph");
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (g.degree(u) < 2) return false;
  return true;
}

/// Standard connectivity for undirected graphs, weak connectivity for
/// directed ones.
inline bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  Bitset seen(g.node_count());
  std::vector<NodeId> stack{0};
  seen.set(0);
  std::size_t visited = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    auto push = [&](NodeId w) {
      if (!seen.test(w)) {
        seen.set(w);
        ++visited;
        stack.push_back(w);
      }
    };
    for (NodeId w : g.out_neighbors(v)) push(w);
    if (g.is_directed())
      for (NodeId w : g.in_neighbors(v)) push(w);
  }
  return visited == g.node_count();
}

}  // namespace bnt
