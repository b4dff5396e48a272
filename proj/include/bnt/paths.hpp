#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnt/bitset.hpp"
#include "bnt/graph.hpp"
#include "bnt/monitors.hpp"

namespace bnt {

/// Probing mechanisms. CSP measures over simple paths between distinct
/// input/output nodes; CapMinus over arbitrary walks (repeated nodes and
/// links allowed) except the degenerate one-node loop path; Cap additionally
/// admits that degenerate loop path at doubly-monitored nodes.
enum class RoutingScheme { Csp, CapMinus, Cap };

inline std::string to_string(RoutingScheme s) {
  switch (s) {
    case RoutingScheme::Csp:
      return "csp";
    case RoutingScheme::CapMinus:
      return "cap-";
    case RoutingScheme::Cap:
      return "cap";
  }
  return "?";
}

inline std::size_t default_path_budget() { return 5'000'000; }

/// Materialized measurement paths plus the node -> path-id incidence used by
/// every separation query. Immutable after enumeration; queries are
/// read-only and safe to issue from many workers at once.
struct PathIndex {
  std::vector<std::vector<NodeId>> paths;
  std::vector<Bitset> incidence;  // per node, over path ids
  std::size_t node_count = 0;

  std::size_t path_count() const { return paths.size(); }

  Bitset covered_nodes() const {
    Bitset c(node_count);
    for (NodeId u = 0; u < node_count; ++u)
      if (incidence[u].any()) c.set(u);
    return c;
  }
};

/// Every simple path from an input node to a *different* output node, found
/// by depth-first search with neighbour ids ascending and sources ascending,
/// so the ordering is identical run to run. Zero-edge paths are excluded.
/// Nodes listed in exclude_starts may appear inside a path or end one but
/// never start one. Throws BudgetExceeded past path_budget emitted paths.
inline PathIndex enumerate_csp_paths(const Graph& g,
                                     const MonitorPlacement& chi,
                                     std::size_t path_budget =
                                         default_path_budget(),
                                     const std::vector<NodeId>&
                                         exclude_starts = {}) {
  chi.validate_against(g);
  const std::size_t n = g.node_count();
  Bitset out_set = chi.output_set(n);
  Bitset excluded(n);
  for (NodeId u : exclude_starts) excluded.set(u);

  PathIndex idx;
  idx.node_count = n;

  std::vector<NodeId> current;
  Bitset on_path(n);

  // Iterative DFS; frame = (node, next neighbour position).
  struct Frame {
    NodeId node;
    std::size_t next;
  };
  std::vector<Frame> stack;

  for (NodeId src : chi.inputs) {
    if (excluded.test(src)) continue;
    current.assign(1, src);
    on_path.clear();
    on_path.set(src);
    stack.assign(1, Frame{src, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& next = g.out_neighbors(f.node);
      if (f.next >= next.size()) {
        on_path.reset(f.node);
        current.pop_back();
        stack.pop_back();
        continue;
      }
      NodeId w = next[f.next++];
      if (on_path.test(w)) continue;
      current.push_back(w);
      on_path.set(w);
      if (out_set.test(w) && w != src) {
        if (idx.paths.size() >= path_budget)
          throw BudgetExceeded("path budget exceeded", idx.paths.size());
        idx.paths.push_back(current);
      }
      stack.push_back(Frame{w, 0});
    }
  }

  idx.incidence.assign(n, Bitset(idx.paths.size()));
  for (std::size_t p = 0; p < idx.paths.size(); ++p)
    for (NodeId u : idx.paths[p]) idx.incidence[u].set(p);
  return idx;
}

/// P(U): union of the per-node incidences.
inline Bitset path_union(const PathIndex& idx, const std::vector<NodeId>& u) {
  Bitset acc(idx.path_count());
  for (NodeId v : u) {
    if (v >= idx.node_count) throw DomainError("path_union: bad node id");
    acc |= idx.incidence[v];
  }
  return acc;
}

struct SeparationResult {
  bool separated = false;
  /// Smallest path id in the symmetric difference, when separated.
  std::optional<std::size_t> witness_path;
};

/// Separation test under CSP: P(U) and P(W) differ somewhere.
inline SeparationResult csp_separates(const PathIndex& idx,
                                      const std::vector<NodeId>& u,
                                      const std::vector<NodeId>& w) {
  if (u == w) throw DomainError("csp_separates: U and W must differ");
  Bitset pu = path_union(idx, u);
  Bitset pw = path_union(idx, w);
  pu ^= pw;
  if (pu.none()) return SeparationResult{};
  return SeparationResult{true, pu.first_set()};
}

namespace detail {

/// Walk-scheme separation core. live_set(avoid) marks every node u not in
/// `avoid` that lies on some measurement walk of >= 1 edge avoiding `avoid`:
/// u must be forward-reachable from the surviving inputs and backward-
/// reachable from the surviving outputs; a doubly-monitored u additionally
/// needs an incident edge that keeps a walk alive (otherwise its only
/// candidate walk is the banned degenerate loop path). With allow_dlp the
/// degenerate loop path counts, so any surviving doubly-monitored node is
/// live.
inline Bitset live_set(const Graph& g, const Bitset& in_set,
                       const Bitset& out_set, const Bitset& avoid,
                       bool allow_dlp) {
  const std::size_t n = g.node_count();
  auto multi_reach = [&](const Bitset& seeds, bool forward) {
    Bitset seen(n);
    std::vector<NodeId> stack;
    seeds.for_each_set([&](std::size_t s) {
      if (!avoid.test(s)) {
        seen.set(s);
        stack.push_back(NodeId(s));
      }
    });
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      const auto& next = g.is_directed()
                             ? (forward ? g.out_neighbors(v)
                                        : g.in_neighbors(v))
                             : g.out_neighbors(v);
      for (NodeId w : next) {
        if (!seen.test(w) && !avoid.test(w)) {
          seen.set(w);
          stack.push_back(w);
        }
      }
    }
    return seen;
  };

  Bitset from_in = multi_reach(in_set, true);
  Bitset to_out = multi_reach(out_set, false);

  Bitset live(n);
  for (NodeId u = 0; u < n; ++u) {
    if (avoid.test(u) || !from_in.test(u) || !to_out.test(u)) continue;
    if (in_set.test(u) && out_set.test(u)) {
      if (allow_dlp) {
        live.set(u);
        continue;
      }
      // need a >= 1-edge walk: an in-neighbour fed by the inputs or an
      // out-neighbour that still reaches the outputs
      bool ok = false;
      for (NodeId y : g.in_neighbors(u))
        if (!avoid.test(y) && from_in.test(y)) {
          ok = true;
          break;
        }
      if (!ok)
        for (NodeId x : g.out_neighbors(u))
          if (!avoid.test(x) && to_out.test(x)) {
            ok = true;
            break;
          }
      if (!ok) continue;
    }
    live.set(u);
  }
  return live;
}

}  // namespace detail

struct WalkWitness {
  bool exists = false;
  std::vector<NodeId> walk;
};

/// Existence oracle for walk schemes: is there a measurement walk (>= 1
/// edge, input node to output node) that avoids every node of `avoid` and
/// touches some node of `touch`? Decided by reachability, never by
/// enumeration; only the touched-node-set semantics matters for
/// separation. Returns a witness walk when one exists.
inline WalkWitness cap_minus_separating_path_exists(
    const Graph& g, const MonitorPlacement& chi,
    const std::vector<NodeId>& touch, const std::vector<NodeId>& avoid,
    bool allow_dlp = false) {
  chi.validate_against(g);
  const std::size_t n = g.node_count();
  Bitset avoid_set(n), touch_set(n);
  for (NodeId u : avoid) {
    if (u >= n) throw DomainError("avoid set: bad node id");
    avoid_set.set(u);
  }
  for (NodeId u : touch) {
    if (u >= n) throw DomainError("touch set: bad node id");
    if (avoid_set.test(u))
      throw DomainError("touch and avoid sets must be disjoint");
    touch_set.set(u);
  }

  Bitset in_set = chi.input_set(n), out_set = chi.output_set(n);
  Bitset live = detail::live_set(g, in_set, out_set, avoid_set, allow_dlp);
  live &= touch_set;
  if (live.none()) return WalkWitness{};

  NodeId u = NodeId(live.first_set());

  // Reconstruct one witness walk through u: an input->u segment and a
  // u->output segment; walks may repeat nodes, so plain concatenation works.
  auto bfs_path = [&](NodeId from, const Bitset& targets, bool forward)
      -> std::optional<std::vector<NodeId>> {
    std::vector<std::int64_t> prev(n, -1);
    std::vector<NodeId> queue{from};
    prev[from] = from;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      NodeId v = queue[qi];
      if (targets.test(v)) {
        std::vector<NodeId> path{v};
        while (v != from) {
          v = NodeId(prev[v]);
          path.push_back(v);
        }
        if (forward) std::reverse(path.begin(), path.end());
        return path;
      }
      const auto& next = g.is_directed()
                             ? (forward ? g.out_neighbors(v)
                                        : g.in_neighbors(v))
                             : g.out_neighbors(v);
      for (NodeId w : next)
        if (prev[w] < 0 && !avoid_set.test(w)) {
          prev[w] = v;
          queue.push_back(w);
        }
    }
    return std::nullopt;
  };

  Bitset usable_in = in_set, usable_out = out_set;
  // drop avoided monitors
  for (NodeId v : avoid) {
    usable_in.reset(v);
    usable_out.reset(v);
  }

  auto head = bfs_path(u, usable_in, false);   // u back to an input
  auto tail = bfs_path(u, usable_out, true);   // u forward to an output
  WalkWitness w;
  w.exists = true;
  if (head && tail) {
    w.walk = *head;
    w.walk.insert(w.walk.end(), tail->begin() + 1, tail->end());
    if (w.walk.size() < 2 && !allow_dlp) {
      // only the zero-edge walk fell out of the BFS; extend through a
      // neighbour kept alive by the live-set test
      for (NodeId y : g.in_neighbors(u)) {
        if (avoid_set.test(y)) continue;
        auto up = bfs_path(y, usable_in, false);
        if (up) {
          w.walk = *up;
          w.walk.push_back(u);
          break;
        }
      }
      if (w.walk.size() < 2) {
        for (NodeId x : g.out_neighbors(u)) {
          if (avoid_set.test(x)) continue;
          auto down = bfs_path(x, usable_out, true);
          if (down) {
            w.walk.assign(1, u);
            w.walk.insert(w.walk.end(), down->begin(), down->end());
            break;
          }
        }
      }
    }
  }
  return w;
}

}  // namespace bnt
