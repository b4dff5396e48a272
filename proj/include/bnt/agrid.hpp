#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bnt/graph.hpp"
#include "bnt/identifiability.hpp"
#include "bnt/monitors.hpp"
#include "bnt/rng.hpp"

namespace bnt {

/// Output of the degree-boosting pass: the augmented graph, the edges it
/// added, and the minimal-degree monitor placement selected on it.
struct AgridResult {
  Graph augmented;
  std::vector<Edge> added_edges;
  MonitorPlacement placement;
  std::uint64_t seed = 0;
  int d = 0;
};

/// Raises the minimal degree of an undirected network to d by random edge
/// addition, then selects 2d monitors with the minimal-degree heuristic.
/// Nodes are visited in ascending id order; a node short of degree d at
/// visit time receives edges to uniformly drawn distinct non-neighbours
/// (the node itself and already-adjacent nodes are never drawn, so no
/// loops or duplicates arise). Deterministic given the seed.
inline AgridResult agrid(const Graph& g, int d, std::uint64_t seed) {
  if (g.is_directed()) throw DomainError("agrid expects an undirected graph");
  if (d < 1) throw DomainError("agrid requires d >= 1");
  if (g.node_count() <= std::size_t(d))
    throw DomainError("agrid: cannot reach degree d with so few nodes");

  Rng rng(seed);
  Graph aug = g;
  std::vector<Edge> added;
  for (NodeId v = 0; v < aug.node_count(); ++v) {
    std::size_t deg = aug.degree(v);
    if (deg >= std::size_t(d)) continue;
    std::size_t need = std::size_t(d) - deg;
    std::vector<NodeId> candidates;
    for (NodeId w = 0; w < aug.node_count(); ++w)
      if (w != v && !aug.has_edge(v, w)) candidates.push_back(w);
    for (std::size_t i = 0; i < need; ++i) {
      std::size_t j = std::size_t(rng.below(candidates.size()));
      NodeId w = candidates[j];
      candidates.erase(candidates.begin() + std::ptrdiff_t(j));
      aug.add_edge(v, w);
      added.push_back({std::min(v, w), std::max(v, w)});
    }
  }
  MonitorPlacement chi = mdmp(aug, d);
  return AgridResult{std::move(aug), std::move(added), std::move(chi), seed,
                     d};
}

// ---------------------------------------------------------------------------
// Cost-benefit tradeoffs
// ---------------------------------------------------------------------------

struct CostBenefitInput {
  /// C_G(e): cost of adding an edge.
  std::map<Edge, Rational> edge_cost;
  /// B_G(t): cost of running a tomography test on the base network.
  std::map<std::int64_t, Rational> test_cost_base;
  /// B_{G^A}(t): the same on the augmented network.
  std::map<std::int64_t, Rational> test_cost_aug;
  std::vector<std::int64_t> horizon;
};

namespace detail {

inline Rational edge_cost_sum(const CostBenefitInput& cbi,
                              const std::vector<Edge>& added) {
  Rational sum = 0;
  for (const Edge& e : added) {
    Edge key{std::min(e.first, e.second), std::max(e.first, e.second)};
    auto it = cbi.edge_cost.find(key);
    if (it == cbi.edge_cost.end())
      throw DomainError("cost-benefit: missing edge cost entry");
    if (it->second < 0) throw DomainError("cost-benefit: negative cost");
    sum += it->second;
  }
  return sum;
}

inline Rational lookup_cost(const std::map<std::int64_t, Rational>& table,
                            std::int64_t t, const char* what) {
  auto it = table.find(t);
  if (it == table.end()) throw DomainError(std::string("missing ") + what);
  if (it->second < 0) throw DomainError("cost-benefit: negative cost");
  return it->second;
}

}  // namespace detail

/// kappa(G,T) = sum_T B_G(t) / (sum_added C_G(e) + sum_T B_{G^A}(t)).
/// Values below 1 mean the augmentation pays for itself over the horizon;
/// thresholding is the caller's policy.
inline Rational kappa_tradeoff(const CostBenefitInput& cbi,
                               const std::vector<Edge>& added) {
  if (cbi.horizon.empty()) throw DomainError("kappa: empty horizon");
  Rational numerator = 0, denominator = detail::edge_cost_sum(cbi, added);
  for (std::int64_t t : cbi.horizon) {
    numerator += detail::lookup_cost(cbi.test_cost_base, t, "B_G entry");
    denominator += detail::lookup_cost(cbi.test_cost_aug, t, "B_GA entry");
  }
  if (denominator == 0) throw DomainError("kappa: zero denominator");
  return numerator / denominator;
}

/// beta(t) = B_{G^A}(t) - sum_added C(e); positive means the added edges
/// pay off in that single step.
inline Rational beta_step(const CostBenefitInput& cbi, std::int64_t t,
                          const std::vector<Edge>& added) {
  return detail::lookup_cost(cbi.test_cost_aug, t, "B_GA entry") -
         detail::edge_cost_sum(cbi, added);
}

}  // namespace bnt
