#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnt/graph.hpp"
#include "bnt/rng.hpp"

namespace bnt {

// ---------------------------------------------------------------------------
// Hypergrids
//
// Nodes of H_{n,d} are the coordinate vectors [1..n]^d. The id encoding is
// fixed mixed-radix with coordinate 1 varying fastest:
//   id = sum_i (x_i - 1) * n^(i-1)
// so that node lists in placements and reports are reproducible.
// ---------------------------------------------------------------------------

inline NodeId hypergrid_node_id(const std::vector<int>& coords, int n) {
  std::uint64_t id = 0;
  std::uint64_t stride = 1;
  for (int c : coords) {
    if (c < 1 || c > n) throw DomainError("hypergrid coordinate out of range");
    id += std::uint64_t(c - 1) * stride;
    stride *= std::uint64_t(n);
  }
  return NodeId(id);
}

inline std::vector<int> hypergrid_coords(NodeId id, int n, int d) {
  std::vector<int> coords(d);
  std::uint64_t rest = id;
  for (int i = 0; i < d; ++i) {
    coords[i] = int(rest % std::uint64_t(n)) + 1;
    rest /= std::uint64_t(n);
  }
  return coords;
}

struct HypergridGraph {
  Graph graph;
  int n = 0;
  int d = 0;

  NodeId id_of(const std::vector<int>& coords) const {
    return hypergrid_node_id(coords, n);
  }
  std::vector<int> coords_of(NodeId id) const {
    return hypergrid_coords(id, n, d);
  }
};

/// Directed H_{n,d}: edge x -> y iff y_i - x_i = 1 in one coordinate and the
/// rest agree. Undirected uses |x_i - y_i| = 1. Requires n >= 3 (smaller
/// supports have no interior node of degree 2d) and d >= 1.
inline HypergridGraph gen_hypergrid(int n, int d, bool directed) {
  if (n < 3) throw DomainError("gen_hypergrid requires n >= 3");
  if (d < 1) throw DomainError("gen_hypergrid requires d >= 1");
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) {
    total *= std::uint64_t(n);
    if (total > (std::uint64_t(1) << 31))
      throw CapacityError("hypergrid node count exceeds node-id space");
  }
  Graph g(std::size_t(total), directed);
  std::vector<int> coords(d, 1);
  for (std::uint64_t id = 0; id < total; ++id) {
    std::uint64_t stride = 1;
    for (int i = 0; i < d; ++i) {
      if (coords[i] < n) g.add_edge(NodeId(id), NodeId(id + stride));
      stride *= std::uint64_t(n);
    }
    // advance mixed-radix counter, coordinate 1 fastest
    for (int i = 0; i < d; ++i) {
      if (++coords[i] <= n) break;
      coords[i] = 1;
    }
  }
  for (std::uint64_t id = 0; id < total; ++id) {
    auto c = hypergrid_coords(NodeId(id), n, d);
    std::string label = "(";
    for (int i = 0; i < d; ++i)
      label += (i ? "," : "") + std::to_string(c[i]);
    g.set_label(NodeId(id), label + ")");
  }
  return HypergridGraph{std::move(g), n, d};
}

/// The border set along dimension i (1-based): nodes with x_i = 1.
inline std::vector<NodeId> border_nodes(int n, int d, int i) {
  if (i < 1 || i > d) throw DomainError("border dimension out of range");
  std::uint64_t total = 1;
  for (int k = 0; k < d; ++k) total *= std::uint64_t(n);
  std::vector<NodeId> out;
  for (std::uint64_t id = 0; id < total; ++id)
    if (hypergrid_coords(NodeId(id), n, d)[i - 1] == 1)
      out.push_back(NodeId(id));
  return out;
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

enum class TreeOrientation { Downward, Upward, Undirected };

/// Rooted tree given by a parent map; exactly one node (the root) has no
/// parent. Downward orientation directs edges parent->child, upward the
/// reverse.
struct TreeSpec {
  std::vector<std::optional<NodeId>> parent;
  TreeOrientation orientation = TreeOrientation::Downward;

  std::size_t node_count() const { return parent.size(); }
};

inline Graph gen_tree(const TreeSpec& spec) {
  const std::size_t n = spec.node_count();
  if (n == 0) throw DomainError("gen_tree: empty spec");
  std::size_t roots = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (!spec.parent[u].has_value()) {
      ++roots;
      continue;
    }
    // walk to the root; a cycle never reaches one
    std::size_t steps = 0;
    NodeId v = NodeId(u);
    while (spec.parent[v].has_value()) {
      v = *spec.parent[v];
      if (++steps > n) throw DomainError("gen_tree: cyclic parent map");
    }
  }
  if (roots != 1) throw DomainError("gen_tree: parent map must have one root");

  Graph g(n, spec.orientation != TreeOrientation::Undirected);
  for (std::size_t u = 0; u < n; ++u) {
    if (!spec.parent[u].has_value()) continue;
    NodeId p = *spec.parent[u];
    switch (spec.orientation) {
      case TreeOrientation::Downward:
        g.add_edge(p, NodeId(u));
        break;
      case TreeOrientation::Upward:
        g.add_edge(NodeId(u), p);
        break;
      case TreeOrientation::Undirected:
        g.add_edge(p, NodeId(u));
        break;
    }
  }
  return g;
}

/// Complete binary tree of the given depth (depth 0 is a single node) in
/// heap order: children of i are 2i+1 and 2i+2.
inline TreeSpec complete_binary_tree(int depth, TreeOrientation orientation) {
  if (depth < 0) throw DomainError("complete_binary_tree: negative depth");
  std::size_t n = (std::size_t(1) << (depth + 1)) - 1;
  TreeSpec spec;
  spec.orientation = orientation;
  spec.parent.resize(n);
  for (std::size_t u = 1; u < n; ++u) spec.parent[u] = NodeId((u - 1) / 2);
  return spec;
}

/// Random recursive tree: node i attaches to a uniform node < i.
inline TreeSpec random_tree(std::size_t n, TreeOrientation orientation,
                            std::uint64_t seed) {
  if (n == 0) throw DomainError("random_tree: n must be positive");
  Rng rng(seed);
  TreeSpec spec;
  spec.orientation = orientation;
  spec.parent.resize(n);
  for (std::size_t u = 1; u < n; ++u)
    spec.parent[u] = NodeId(rng.below(u));
  return spec;
}

/// A rooted tree is line-free when every non-leaf node has at least two
/// children; a lone-child chain is a line and caps identifiability at 1.
inline bool tree_is_line_free(const TreeSpec& spec) {
  std::vector<int> children(spec.node_count(), 0);
  for (std::size_t u = 0; u < spec.node_count(); ++u)
    if (spec.parent[u].has_value()) ++children[*spec.parent[u]];
  for (std::size_t u = 0; u < spec.node_count(); ++u)
    if (children[u] == 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Random graphs
// ---------------------------------------------------------------------------

/// Erdos–Renyi G(n,p). Candidate pairs are visited in a fixed order
/// (u ascending, then v ascending), each kept with probability p, so the
/// edge set is a pure function of (n, p, seed, directed).
inline Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed,
                             bool directed) {
  if (p < 0.0 || p > 1.0) throw DomainError("edge probability out of [0,1]");
  Rng rng(seed);
  Graph g(n, directed);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = directed ? 0 : u + 1; v < n; ++v) {
      if (u == v) continue;
      if (rng.unit() < p) g.add_edge(u, v);
    }
  }
  return g;
}

/// Random DAG: each pair u < v gets edge u -> v with probability p.
inline Graph gen_random_dag(std::size_t n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw DomainError("edge probability out of [0,1]");
  Rng rng(seed);
  Graph g(n, true);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.unit() < p) g.add_edge(u, v);
  return g;
}

}  // namespace bnt
