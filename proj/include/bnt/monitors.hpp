#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "bnt/graph.hpp"
#include "bnt/rng.hpp"
#include "bnt/topology.hpp"

namespace bnt {

/// The pair (input nodes, output nodes) a placement links to external
/// monitors. Both lists are kept sorted and duplicate-free; inputs and
/// outputs may overlap (the grid placement shares two corners).
struct MonitorPlacement {
  std::vector<NodeId> inputs;
  std::vector<NodeId> outputs;

  MonitorPlacement() = default;
  MonitorPlacement(std::vector<NodeId> in, std::vector<NodeId> out)
      : inputs(std::move(in)), outputs(std::move(out)) {
    canonicalize(inputs);
    canonicalize(outputs);
    if (inputs.empty() || outputs.empty())
      throw DomainError("monitor placement needs inputs and outputs");
  }

  void validate_against(const Graph& g) const {
    for (NodeId u : inputs)
      if (u >= g.node_count()) throw DomainError("input monitor id invalid");
    for (NodeId u : outputs)
      if (u >= g.node_count()) throw DomainError("output monitor id invalid");
  }

  Bitset input_set(std::size_t n) const { return to_set(inputs, n); }
  Bitset output_set(std::size_t n) const { return to_set(outputs, n); }

 private:
  static void canonicalize(std::vector<NodeId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  static Bitset to_set(const std::vector<NodeId>& v, std::size_t n) {
    Bitset b(n);
    for (NodeId u : v) b.set(u);
    return b;
  }
};

/// Canonical hypergrid placement: inputs are the union of the d "low" faces
/// (some coordinate equal to 1), outputs the union of the d "high" faces
/// (some coordinate equal to n). For d = 2 this is exactly the border
/// placement with 2n-1 inputs, 2n-1 outputs and two shared corners.
inline MonitorPlacement chi_grid(int n, int d) {
  if (n < 3) throw DomainError("chi_grid requires n >= 3");
  if (d < 1) throw DomainError("chi_grid requires d >= 1");
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) total *= std::uint64_t(n);
  std::vector<NodeId> in, out;
  for (std::uint64_t id = 0; id < total; ++id) {
    auto c = hypergrid_coords(NodeId(id), n, d);
    bool low = false, high = false;
    for (int x : c) {
      low |= (x == 1);
      high |= (x == n);
    }
    if (low) in.push_back(NodeId(id));
    if (high) out.push_back(NodeId(id));
  }
  return MonitorPlacement(std::move(in), std::move(out));
}

/// Root/leaves placement for directed trees: downward trees get the root
/// as input and every leaf as output, upward trees the reverse. Both cases
/// come down to (sources, sinks).
inline MonitorPlacement chi_tree(const Graph& t) {
  if (!t.is_directed())
    throw DomainError("chi_tree expects a directed tree");
  if (t.node_count() < 2 || t.edge_count() != t.node_count() - 1 ||
      !is_connected(t))
    throw DomainError("chi_tree: graph is not a directed tree");
  bool downward = true, upward = true;
  for (NodeId u = 0; u < t.node_count(); ++u) {
    downward &= t.in_degree(u) <= 1;
    upward &= t.out_degree(u) <= 1;
  }
  if (!downward && !upward)
    throw DomainError("chi_tree: graph is not a directed tree");
  std::vector<NodeId> sources, sinks;
  for (NodeId u = 0; u < t.node_count(); ++u) {
    if (t.in_degree(u) == 0) sources.push_back(u);
    if (t.out_degree(u) == 0) sinks.push_back(u);
  }
  return MonitorPlacement(std::move(sources), std::move(sinks));
}

/// Minimal-degree monitor placement. Nodes are ordered by (degree, tie
/// order); the first 2d are taken in consecutive pairs, and within a pair
/// the node earlier in the tie order becomes an input. Degrees are read
/// once, up front; selection adds no edges, so nothing changes mid-run.
/// The default tie order is ascending node id.
inline MonitorPlacement mdmp(const Graph& g, int d,
                             const std::vector<NodeId>& tie_order = {}) {
  if (d < 1) throw DomainError("mdmp requires d >= 1");
  if (g.node_count() < std::size_t(2 * d))
    throw DomainError("mdmp: graph has fewer than 2d nodes");

  std::vector<std::size_t> rank(g.node_count());
  if (tie_order.empty()) {
    for (NodeId u = 0; u < g.node_count(); ++u) rank[u] = u;
  } else {
    if (tie_order.size() != g.node_count())
      throw DomainError("mdmp: tie order must list every node");
    for (std::size_t i = 0; i < tie_order.size(); ++i) rank[tie_order[i]] = i;
  }

  std::vector<NodeId> order(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) order[u] = u;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) < g.degree(b);
    return rank[a] < rank[b];
  });

  std::vector<NodeId> in, out;
  for (int i = 0; i < d; ++i) {
    NodeId x = order[2 * i], y = order[2 * i + 1];
    if (rank[x] > rank[y]) std::swap(x, y);
    in.push_back(x);
    out.push_back(y);
  }
  return MonitorPlacement(std::move(in), std::move(out));
}

/// k_in inputs then k_out outputs drawn uniformly without replacement from
/// the node set; the two sides are disjoint.
inline MonitorPlacement random_placement(const Graph& g, std::size_t k_in,
                                         std::size_t k_out,
                                         std::uint64_t seed) {
  if (k_in == 0 || k_out == 0)
    throw DomainError("random_placement: need at least one monitor per side");
  if (k_in + k_out > g.node_count())
    throw DomainError("random_placement: not enough nodes");
  Rng rng(seed);
  std::vector<NodeId> pool(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) pool[u] = u;
  auto draw = [&](std::size_t k) {
    std::vector<NodeId> picked;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = std::size_t(rng.below(pool.size()));
      picked.push_back(pool[j]);
      pool.erase(pool.begin() + std::ptrdiff_t(j));
    }
    return picked;
  };
  auto in = draw(k_in);
  auto out = draw(k_out);
  return MonitorPlacement(std::move(in), std::move(out));
}

/// Balance check for undirected trees. For each non-leaf u the components
/// of T - u (one per neighbour) are classified as input/output trees; the
/// placement is monitor-balanced when every such family has at least two of
/// each. On failure the report carries the first violating node and its
/// subtree counts.
struct BalanceReport {
  bool balanced = true;
  std::optional<NodeId> witness;
  std::size_t input_trees = 0;
  std::size_t output_trees = 0;
};

inline BalanceReport monitor_balance_report(const Graph& t,
                                            const MonitorPlacement& chi) {
  if (t.is_directed())
    throw DomainError("monitor balance is defined for undirected trees");
  if (t.node_count() == 0 || t.edge_count() != t.node_count() - 1 ||
      !is_connected(t))
    throw DomainError("monitor balance: graph is not a tree");
  chi.validate_against(t);

  const std::size_t n = t.node_count();
  Bitset in_set = chi.input_set(n), out_set = chi.output_set(n);

  for (NodeId u = 0; u < n; ++u) {
    if (t.degree(u) <= 1) continue;  // leaf
    std::size_t in_trees = 0, out_trees = 0;
    Bitset blocked(n);
    blocked.set(u);
    for (NodeId w : t.out_neighbors(u)) {
      Bitset comp = reachable_set(t, w, blocked, Reach::Forward);
      bool has_in = comp.intersects(in_set);
      bool has_out = comp.intersects(out_set);
      in_trees += has_in;
      out_trees += has_out;
    }
    if (in_trees < 2 || out_trees < 2) {
      BalanceReport r;
      r.balanced = false;
      r.witness = u;
      r.input_trees = in_trees;
      r.output_trees = out_trees;
      return r;
    }
  }
  return BalanceReport{};
}

inline bool is_monitor_balanced(const Graph& t, const MonitorPlacement& chi) {
  return monitor_balance_report(t, chi).balanced;
}

}  // namespace bnt
