#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bnt/graph.hpp"
#include "bnt/monitors.hpp"
#include "bnt/paths.hpp"
#include "bnt/topology.hpp"

namespace bnt {

/// Injective node map between two DAGs, viewed as posets under
/// reachability.
struct NodeMap {
  std::vector<NodeId> mapping;  // mapping[u] = image of u
  bool bijective = false;

  NodeId operator()(NodeId u) const { return mapping[u]; }
};

namespace detail {

inline void check_injective(const NodeMap& f, std::size_t codomain) {
  Bitset seen(codomain);
  for (NodeId img : f.mapping) {
    if (img >= codomain) throw DomainError("node map image out of range");
    if (seen.test(img)) throw DomainError("node map is not injective");
    seen.set(img);
  }
}

/// Reachability matrix of a DAG: row u marks every v with u ⪯ v
/// (reflexive). Throws on cycles.
inline std::vector<Bitset> reachability(const Graph& g) {
  if (!g.is_directed()) throw DomainError("expected a directed graph");
  const std::size_t n = g.node_count();
  // topological order via Kahn; leftover nodes mean a cycle
  std::vector<std::size_t> indeg(n);
  for (NodeId u = 0; u < n; ++u) indeg[u] = g.in_degree(u);
  std::vector<NodeId> order;
  for (NodeId u = 0; u < n; ++u)
    if (indeg[u] == 0) order.push_back(u);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (NodeId w : g.out_neighbors(order[i]))
      if (--indeg[w] == 0) order.push_back(w);
  if (order.size() != n) throw DomainError("graph is not acyclic");

  std::vector<Bitset> reach(n, Bitset(n));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId u = *it;
    reach[u].set(u);
    for (NodeId w : g.out_neighbors(u)) reach[u] |= reach[w];
  }
  return reach;
}

/// All-pairs shortest directed distances; SIZE_MAX marks unreachable.
inline std::vector<std::vector<std::size_t>> all_pairs_distance(
    const Graph& g) {
  const std::size_t n = g.node_count();
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> dist(n,
                                             std::vector<std::size_t>(n, inf));
  for (NodeId s = 0; s < n; ++s) {
    dist[s][s] = 0;
    std::vector<NodeId> queue{s};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      NodeId v = queue[qi];
      for (NodeId w : g.out_neighbors(v)) {
        if (dist[s][w] == inf) {
          dist[s][w] = dist[s][v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return dist;
}

}  // namespace detail

/// G*: edge (u,v) iff v is reachable from u by a nonempty path.
inline Graph transitive_closure(const Graph& g) {
  auto reach = detail::reachability(g);
  Graph out(g.node_count(), true);
  for (NodeId u = 0; u < g.node_count(); ++u)
    reach[u].for_each_set([&](std::size_t v) {
      if (v != u) out.add_edge(u, NodeId(v));
    });
  return out;
}

/// Checks u ⪯_g v iff f(u) ⪯_h f(v) over all node pairs.
inline bool is_order_embedding(const NodeMap& f, const Graph& g,
                               const Graph& h) {
  if (f.mapping.size() != g.node_count())
    throw DomainError("node map must be total on the source graph");
  detail::check_injective(f, h.node_count());
  auto rg = detail::reachability(g);
  auto rh = detail::reachability(h);
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (rg[u].test(v) != rh[f(u)].test(f(v))) return false;
  return true;
}

struct EmbeddingClass {
  bool distance_increasing = false;
  bool distance_preserving = false;
};

/// Classifies an order embedding by shortest-path distances on comparable
/// pairs. Incomparable pairs have no finite distance on either side (the
/// embedding already forces incomparability to transfer) and are skipped.
inline EmbeddingClass classify_embedding(const NodeMap& f, const Graph& g,
                                         const Graph& h) {
  auto dg = detail::all_pairs_distance(g);
  auto dh = detail::all_pairs_distance(h);
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  EmbeddingClass cls;
  cls.distance_increasing = true;
  cls.distance_preserving = true;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (u == v || dg[u][v] == inf) continue;
      std::size_t dhv = dh[f(u)][f(v)];
      if (dhv == inf || dg[u][v] > dhv) cls.distance_increasing = false;
      if (dg[u][v] != dhv) cls.distance_preserving = false;
    }
  }
  if (cls.distance_preserving) cls.distance_increasing = true;
  return cls;
}

enum class EmbeddingKind { Any, DistanceIncreasing, DistancePreserving,
                           Bijective };

inline std::size_t default_embedding_ceiling() { return 10; }

/// Backtracking search for an order embedding of g into h, source nodes
/// assigned in ascending id order and candidate images tried in ascending
/// id order, so the first map found is the lexicographically smallest.
/// Refuses inputs past the brute-force ceiling rather than guessing.
inline std::optional<NodeMap> find_embedding(
    const Graph& g, const Graph& h, EmbeddingKind require = EmbeddingKind::Any,
    std::size_t ceiling = default_embedding_ceiling()) {
  const std::size_t n = g.node_count(), m = h.node_count();
  if (n > m) return std::nullopt;
  if (m > ceiling)
    throw CapacityError("find_embedding: graph beyond brute-force ceiling");
  if (require == EmbeddingKind::Bijective && n != m) return std::nullopt;

  auto rg = detail::reachability(g);
  auto rh = detail::reachability(h);
  auto dg = detail::all_pairs_distance(g);
  auto dh = detail::all_pairs_distance(h);
  const std::size_t inf = std::numeric_limits<std::size_t>::max();

  std::vector<NodeId> map(n);
  Bitset used(m);

  auto consistent = [&](NodeId u, NodeId img) {
    for (NodeId v = 0; v < u; ++v) {
      NodeId iv = map[v];
      if (rg[u].test(v) != rh[img].test(iv)) return false;
      if (rg[v].test(u) != rh[iv].test(img)) return false;
      if (require == EmbeddingKind::DistanceIncreasing ||
          require == EmbeddingKind::DistancePreserving) {
        auto check = [&](std::size_t dgv, std::size_t dhv) {
          if (dgv == inf) return true;
          if (dhv == inf) return false;
          if (require == EmbeddingKind::DistancePreserving)
            return dgv == dhv;
          return dgv <= dhv;
        };
        if (!check(dg[u][v], dh[img][iv])) return false;
        if (!check(dg[v][u], dh[iv][img])) return false;
      }
    }
    return true;
  };

  // depth-first over assignment prefixes
  std::vector<NodeId> cursor(n, 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == n) {
      NodeMap f;
      f.mapping = map;
      f.bijective = (n == m);
      return f;
    }
    bool advanced = false;
    for (NodeId img = cursor[depth]; img < m; ++img) {
      if (used.test(img)) continue;
      if (!consistent(NodeId(depth), img)) continue;
      map[depth] = img;
      used.set(img);
      cursor[depth] = img + 1;
      ++depth;
      if (depth < n) cursor[depth] = 0;
      advanced = true;
      break;
    }
    if (!advanced) {
      if (depth == 0) return std::nullopt;
      --depth;
      used.reset(map[depth]);
    }
  }
}

/// Smallest d <= d_max with g embeddable into the hypergrid H_{n,d}, if
/// any. Intended for small transitively closed DAGs.
inline std::optional<int> hypergrid_dimension_lower_bound(
    const Graph& g, int n, int d_max,
    std::size_t ceiling = default_embedding_ceiling()) {
  for (int d = 1; d <= d_max; ++d) {
    HypergridGraph grid = gen_hypergrid(n, d, true);
    if (grid.graph.node_count() < g.node_count()) continue;
    std::size_t eff_ceiling = std::max(ceiling, grid.graph.node_count());
    if (find_embedding(g, grid.graph, EmbeddingKind::Any, eff_ceiling))
      return d;
  }
  return std::nullopt;
}

/// Routing consistency over explicitly enumerated paths: any two paths
/// that share two nodes traverse the identical subpath between them,
/// regardless of traversal direction.
inline bool is_routing_consistent(const PathIndex& idx) {
  auto segment = [](const std::vector<NodeId>& p, NodeId u,
                    NodeId w) -> std::optional<std::vector<NodeId>> {
    auto iu = std::find(p.begin(), p.end(), u);
    auto iw = std::find(p.begin(), p.end(), w);
    if (iu == p.end() || iw == p.end() || iu >= iw) return std::nullopt;
    return std::vector<NodeId>(iu, iw + 1);
  };
  for (std::size_t i = 0; i < idx.paths.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.paths.size(); ++j) {
      const auto& p = idx.paths[i];
      const auto& q = idx.paths[j];
      std::vector<NodeId> shared;
      for (NodeId u : p)
        if (std::find(q.begin(), q.end(), u) != q.end()) shared.push_back(u);
      for (NodeId u : shared) {
        for (NodeId w : shared) {
          if (u == w) continue;
          auto sp = segment(p, u, w);
          if (!sp) continue;
          auto sq = segment(q, u, w);
          if (sq && *sp != *sq) return false;
          auto sq_rev = segment(q, w, u);
          if (sq_rev) {
            std::reverse(sq_rev->begin(), sq_rev->end());
            if (*sp != *sq_rev) return false;
          }
        }
      }
    }
  }
  return true;
}

/// G^k: edge (u,v) iff 1 <= d_G(u,v) <= k.
inline Graph graph_power(const Graph& g, int k) {
  if (k < 1) throw DomainError("graph_power requires k >= 1");
  auto dist = detail::all_pairs_distance(g);
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  Graph out(g.node_count(), g.is_directed());
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (u == v || dist[u][v] == inf) continue;
      if (dist[u][v] <= std::size_t(k) && !out.has_edge(u, v))
        out.add_edge(u, v);
    }
  return out;
}

/// chi^f: the imagewise placement (f ∘ chi_i, f ∘ chi_o).
inline MonitorPlacement push_forward_placement(const NodeMap& f,
                                               const MonitorPlacement& chi) {
  std::vector<NodeId> in, out;
  for (NodeId u : chi.inputs) {
    if (u >= f.mapping.size())
      throw DomainError("placement node outside the map's domain");
    in.push_back(f(u));
  }
  for (NodeId u : chi.outputs) {
    if (u >= f.mapping.size())
      throw DomainError("placement node outside the map's domain");
    out.push_back(f(u));
  }
  return MonitorPlacement(std::move(in), std::move(out));
}

}  // namespace bnt
