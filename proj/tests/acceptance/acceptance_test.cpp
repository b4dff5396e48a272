// Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
// Tolerances and thresholds are pinned in the assertions themselves.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "bnt/agrid.hpp"
#include "bnt/embedding.hpp"
#include "bnt/experiments.hpp"
#include "bnt/graphml.hpp"
#include "bnt/identifiability.hpp"
#include "bnt/serialize.hpp"
#include "bnt/topology.hpp"

#ifndef BNT_DATA_DIR
#define BNT_DATA_DIR "data"
#endif
#ifndef TOMO_BIN_DEFAULT
#define TOMO_BIN_DEFAULT "build/tools/tomo"
#endif

using namespace bnt;

namespace {

class Acceptance : public ::testing::Test {
 protected:
  void TearDown() override {
    const auto* info =
        ::testing::UnitTest::GetInstance()->current_test_info();
    std::cout << "[" << info->name() << "] "
              << (HasFailure() ? "FAIL" : "PASS") << std::endl;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Graph load_fixture(const std::string& name) {
  return ingest_graphml_file(std::string(BNT_DATA_DIR) + "/" + name).graph;
}

MonitorPlacement sources_and_sinks(const Graph& g) {
  std::vector<NodeId> in, out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.in_degree(u) == 0) in.push_back(u);
    if (g.out_degree(u) == 0) out.push_back(u);
  }
  return MonitorPlacement(in, out);
}

void dump_counterexample(const std::string& tag, const Json& detail) {
  Json j;
  j["case"] = tag;
  j["detail"] = detail;
  std::cerr << "counterexample: " << j.dump() << "\n";
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.first, e.second});
  return Json{{"nodes", g.node_count()},
              {"directed", g.is_directed()},
              {"edges", edges}};
}

// Criterion 1: directed grids reach exactly 2 under the border placement.
TEST_F(Acceptance, Criterion01_DirectedGridsMuIsTwo) {
  for (int n : {3, 4}) {
    auto t0 = std::chrono::steady_clock::now();
    auto hg = gen_hypergrid(n, 2, true);
    IdentReport r = compute_mu(hg.graph, chi_grid(n, 2), {});
    EXPECT_EQ(r.mu, 2u) << "n=" << n;
    EXPECT_LT(seconds_since(t0), 10.0) << "n=" << n;
  }
}

// Criterion 2: the directed 3x3x3 hypergrid reaches exactly 3 under the
// walk scheme, decided by reachability alone.
TEST_F(Acceptance, Criterion02_HypergridMuIsDimension) {
  auto t0 = std::chrono::steady_clock::now();
  auto hg = gen_hypergrid(3, 3, true);
  MuOptions o;
  o.scheme = RoutingScheme::CapMinus;
  IdentReport r = compute_mu(hg.graph, chi_grid(3, 3), o);
  EXPECT_EQ(r.mu, 3u);
  EXPECT_LT(seconds_since(t0), 60.0);
}

// Criterion 3: dropping the input links next to the origin corner makes
// {(1,2),(2,1)} and {(1,1)} inseparable and caps the search at 1.
TEST_F(Acceptance, Criterion03_BorderPlacementOptimality) {
  auto hg = gen_hypergrid(4, 2, true);
  MonitorPlacement chi = chi_grid(4, 2);
  NodeId a = hg.id_of({1, 2}), b = hg.id_of({2, 1});
  std::vector<NodeId> reduced;
  for (NodeId u : chi.inputs)
    if (u != a && u != b) reduced.push_back(u);
  MonitorPlacement chi2(reduced, chi.outputs);

  PathIndex idx = enumerate_csp_paths(hg.graph, chi2);
  EXPECT_FALSE(csp_separates(idx, {a, b}, {hg.id_of({1, 1})}).separated);
  EXPECT_LE(compute_mu(hg.graph, chi2, {}).mu, 1u);
}

// Criterion 4: line-free complete binary trees sit at exactly 1; removing
// one leaf monitor collapses the downward case to 0.
TEST_F(Acceptance, Criterion04_DirectedTrees) {
  for (int depth : {2, 3, 4}) {
    for (TreeOrientation orient :
         {TreeOrientation::Downward, TreeOrientation::Upward}) {
      TreeSpec spec = complete_binary_tree(depth, orient);
      ASSERT_TRUE(tree_is_line_free(spec));
      Graph t = gen_tree(spec);
      MonitorPlacement chi = chi_tree(t);
      EXPECT_EQ(compute_mu(t, chi, {}).mu, 1u)
          << "depth=" << depth << " upward="
          << (orient == TreeOrientation::Upward);
    }
    Graph down =
        gen_tree(complete_binary_tree(depth, TreeOrientation::Downward));
    MonitorPlacement chi = chi_tree(down);
    std::vector<NodeId> fewer(chi.outputs.begin(), chi.outputs.end() - 1);
    EXPECT_EQ(compute_mu(down, MonitorPlacement(chi.inputs, fewer), {}).mu,
              0u)
        << "depth=" << depth;
  }
}

// Criterion 5: monitor-balanced placements on undirected trees give
// exactly 1; each unbalanced pattern gives 0 with a witness node.
//
// The balanced draws keep the two monitor sides disjoint, monitor every
// leaf, and avoid placements whose path set contains a line (an edge
// between two unmonitored nodes of degree <= 2): an unmonitored leaf lies
// on no path at all and a line makes two adjacent nodes share every path,
// so either way the search would be decided by a degenerate pair rather
// than the balance property under test.
TEST_F(Acceptance, Criterion05_UndirectedTrees) {
  std::size_t balanced_checked = 0;
  std::uint64_t tree_seed = 0;
  Rng side(321);
  while (balanced_checked < 20 && tree_seed < 4000) {
    ++tree_seed;
    std::size_t n = 5 + tree_seed % 8;  // 5..12 nodes
    Graph t = gen_tree(random_tree(n, TreeOrientation::Undirected,
                                   9000 + tree_seed));
    // seeded search for a balanced placement on this tree
    bool found = false;
    MonitorPlacement chi({0}, {0});
    for (int attempt = 0; attempt < 60 && !found; ++attempt) {
      std::vector<NodeId> in, out;
      for (NodeId u = 0; u < n; ++u) {
        if (t.degree(u) == 1) {
          (side.below(2) ? in : out).push_back(u);
        } else {
          switch (side.below(4)) {
            case 0: in.push_back(u); break;
            case 1: out.push_back(u); break;
            default: break;
          }
        }
      }
      if (in.empty() || out.empty()) continue;
      Bitset monitored(n);
      for (NodeId u : in) monitored.set(u);
      for (NodeId u : out) monitored.set(u);
      bool line_free_paths = true;
      for (const Edge& e : t.edges())
        if (t.degree(e.first) <= 2 && t.degree(e.second) <= 2 &&
            !monitored.test(e.first) && !monitored.test(e.second))
          line_free_paths = false;
      if (!line_free_paths) continue;
      MonitorPlacement candidate(in, out);
      if (is_monitor_balanced(t, candidate)) {
        chi = candidate;
        found = true;
      }
    }
    if (!found) continue;
    ++balanced_checked;
    EXPECT_EQ(compute_mu(t, chi, {}).mu, 1u) << "tree_seed=" << tree_seed;
  }
  EXPECT_EQ(balanced_checked, 20u);

  // the three unbalanced patterns
  Graph path = Graph::undirected(5);
  for (NodeId u = 0; u + 1 < 5; ++u) path.add_edge(u, u + 1);
  Graph star = Graph::undirected(5);
  for (NodeId leaf = 1; leaf < 5; ++leaf) star.add_edge(0, leaf);
  struct Case {
    const Graph* tree;
    MonitorPlacement chi;
  };
  std::vector<Case> cases{
      {&path, MonitorPlacement({0}, {4})},        // one input, one output
      {&star, MonitorPlacement({1}, {2, 3, 4})},  // one input tree
      {&star, MonitorPlacement({1, 2, 3}, {4})},  // one output tree
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    BalanceReport br = monitor_balance_report(*cases[i].tree, cases[i].chi);
    EXPECT_FALSE(br.balanced) << "case " << i;
    EXPECT_TRUE(br.witness.has_value()) << "case " << i;
    EXPECT_EQ(compute_mu(*cases[i].tree, cases[i].chi, {}).mu, 0u)
        << "case " << i;
  }
}

// Criterion 6: undirected hypergrids stay within [d-1, d] for any
// placement of 2d monitors.
TEST_F(Acceptance, Criterion06_UndirectedHypergridBand) {
  auto t0 = std::chrono::steady_clock::now();
  for (int n : {3, 4}) {
    auto hg = gen_hypergrid(n, 2, false);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MonitorPlacement chi = random_placement(hg.graph, 2, 2, seed);
      std::size_t mu = compute_mu(hg.graph, chi, {}).mu;
      EXPECT_GE(mu, 1u) << "n=" << n << " seed=" << seed;
      EXPECT_LE(mu, 2u) << "n=" << n << " seed=" << seed;
    }
  }
  auto cube = gen_hypergrid(3, 3, false);
  MuOptions walk;
  walk.scheme = RoutingScheme::CapMinus;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MonitorPlacement chi = random_placement(cube.graph, 3, 3, seed);
    std::size_t mu = compute_mu(cube.graph, chi, walk).mu;
    EXPECT_GE(mu, 2u) << "seed=" << seed;
    EXPECT_LE(mu, 3u) << "seed=" << seed;
  }
  EXPECT_LT(seconds_since(t0), 300.0);
}

// Criterion 7: structural bounds hold on 100 seeded random instances,
// zero violations permitted.
TEST_F(Acceptance, Criterion07_StructuralBoundSoundness) {
  std::size_t undirected_done = 0, directed_done = 0;
  for (std::uint64_t seed = 1;
       undirected_done < 50 && seed < 4000; ++seed) {
    std::size_t n = 5 + seed % 6;  // 5..10 nodes
    Graph g = gen_erdos_renyi(n, 0.45, 10000 + seed, false);
    if (!is_connected(g)) continue;
    MonitorPlacement chi = mdmp(g, 2);
    BoundsReport b = bounds_report(g, chi);
    IdentReport r = compute_mu(g, chi, {});
    EXPECT_LE(r.mu, b.degree_bound) << "seed=" << seed;
    EXPECT_LT(r.mu, chi.inputs.size() > chi.outputs.size()
                        ? chi.inputs.size()
                        : chi.outputs.size())
        << "seed=" << seed;
    EXPECT_LE(r.mu, b.edge_bound) << "seed=" << seed;
    ++undirected_done;
  }
  for (std::uint64_t seed = 1; directed_done < 50 && seed < 4000; ++seed) {
    std::size_t n = 5 + seed % 6;
    Graph g = gen_random_dag(n, 0.5, 20000 + seed);
    if (!is_connected(g)) continue;
    MonitorPlacement chi = mdmp(g, 2);
    BoundsReport b = bounds_report(g, chi);
    IdentReport r = compute_mu(g, chi, {});
    EXPECT_LE(r.mu, b.degree_bound) << "dag seed=" << seed;  // delta-hat
    EXPECT_LT(r.mu, std::max(chi.inputs.size(), chi.outputs.size()))
        << "dag seed=" << seed;
    ++directed_done;
  }
  EXPECT_EQ(undirected_done, 50u);
  EXPECT_EQ(directed_done, 50u);
}

// Criterion 8: booster postconditions over 50 seeded runs per family;
// the boosted graph never loses identifiability.
TEST_F(Acceptance, Criterion08_AgridPostconditions) {
  auto check_family = [&](const GraphSource& source, int d,
                          const std::string& tag) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      Graph g = source(derive_seed(4242, seed));
      AgridResult boosted = agrid(g, d, derive_seed(seed, 7));
      bool subgraph = true;
      for (const Edge& e : g.edges())
        subgraph &= boosted.augmented.has_edge(e.first, e.second);
      std::size_t delta = degree_stats(boosted.augmented).delta_min;
      std::size_t mu_g = compute_mu(g, mdmp(g, d), {}).mu;
      std::size_t mu_ga =
          compute_mu(boosted.augmented, boosted.placement, {}).mu;
      bool ok = subgraph && delta >= std::size_t(d) && mu_ga >= mu_g;
      if (!ok)
        dump_counterexample(
            tag, Json{{"seed", seed},
                      {"delta", delta},
                      {"mu_g", mu_g},
                      {"mu_ga", mu_ga},
                      {"graph", graph_to_json(g)}});
      EXPECT_TRUE(ok) << tag << " seed=" << seed;
    }
  };
  check_family(er_source(8, 0.3, true), 3, "er8");  // ceil(log2 8) = 3
  Graph eunet = load_fixture("eunetworks.graphml");
  check_family(fixed_source(eunet), 4, "eunetworks");  // ceil(log2 14) = 4
}

// Criterion 9: banded reproduction on the EuNetworks-shaped fixture.
TEST_F(Acceptance, Criterion09_FixtureReproductionBand) {
  Graph g = load_fixture("eunetworks.graphml");
  EXPECT_EQ(compute_mu(g, mdmp(g, 3), {}).mu, 0u);
  std::size_t at_least_one = 0, reached_two = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    AgridResult boosted = agrid(g, 3, seed);
    std::size_t mu = compute_mu(boosted.augmented, boosted.placement, {}).mu;
    at_least_one += (mu >= 1);
    reached_two += (mu >= 2);
  }
  EXPECT_GE(at_least_one, 18u);  // >= 90% of 20 seeds
  EXPECT_GE(reached_two, 1u);
}

// Criterion 10: truncation never under-reports, and the error-fraction
// formula matches an independent brute evaluation exactly.
TEST_F(Acceptance, Criterion10_Truncation) {
  struct Instance {
    Graph g;
    MonitorPlacement chi;
    RoutingScheme scheme;
  };
  std::vector<Instance> instances;
  for (int n : {3, 4})
    instances.push_back(
        {gen_hypergrid(n, 2, true).graph, chi_grid(n, 2), RoutingScheme::Csp});
  Graph tree = gen_tree(complete_binary_tree(3, TreeOrientation::Downward));
  instances.push_back({tree, chi_tree(tree), RoutingScheme::Csp});
  instances.push_back({gen_hypergrid(3, 3, true).graph, chi_grid(3, 3),
                       RoutingScheme::CapMinus});
  Graph eunet = load_fixture("eunetworks.graphml");
  instances.push_back({eunet, mdmp(eunet, 3), RoutingScheme::Csp});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Graph g = gen_erdos_renyi(8, 0.4, 30000 + seed, false);
    if (is_connected(g))
      instances.push_back({g, mdmp(g, 2), RoutingScheme::Csp});
  }

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    MuOptions o;
    o.scheme = inst.scheme;
    std::size_t mu = compute_mu(inst.g, inst.chi, o).mu;
    std::size_t n = inst.g.node_count();
    for (std::size_t alpha : {std::size_t(1), std::size_t(2),
                              truncation_alpha(inst.g), n}) {
      IdentReport t =
          compute_mu_truncated(inst.g, inst.chi, inst.scheme, alpha, o);
      EXPECT_GE(t.mu, mu) << "instance " << i << " alpha " << alpha;
    }
  }

  // independent oracle: Pascal binomials, formula re-derived in test code
  auto oracle = [](std::size_t n, std::size_t delta, std::size_t lambda) {
    std::vector<std::vector<std::uint64_t>> c(
        n + 1, std::vector<std::uint64_t>(n + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) {
      c[i][0] = 1;
      for (std::size_t j = 1; j <= i; ++j)
        c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
    }
    auto zeta = [&](std::size_t i, std::size_t j) {
      return boost::multiprecision::cpp_int(c[n][i]) * (c[n][j] - 1);
    };
    boost::multiprecision::cpp_int num = 0, den = 0;
    for (std::size_t i = 1; i <= delta; ++i)
      for (std::size_t j = lambda + 1; j <= n; ++j) num += zeta(i, j);
    for (std::size_t i = 1; i <= delta; ++i) {
      for (std::size_t j = i; j <= delta; ++j) den += zeta(i, j);
      for (std::size_t j = delta; j <= n; ++j) den += zeta(i, j);
    }
    return Rational(num, den);
  };
  for (std::size_t n = 2; n <= 8; ++n)
    for (std::size_t delta = 1; delta <= n; ++delta)
      for (std::size_t lambda = delta; lambda <= n; ++lambda)
        EXPECT_EQ(error_fraction_bound(n, delta, lambda),
                  oracle(n, delta, lambda))
            << n << "/" << delta << "/" << lambda;
  // the one-node universe has no pairs: both routes agree it is undefined
  EXPECT_THROW(error_fraction_bound(1, 1, 1), DomainError);
}

// Criterion 11: embedding transfer laws over 200 seeded DAG pairs with
// discovered embeddings; any counterexample dumps a reproduction case.
TEST_F(Acceptance, Criterion11_EmbeddingTheorems) {
  std::size_t pairs_with_embedding = 0;

  auto connected_dag = [](std::uint64_t seed, std::size_t n) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      Graph g = gen_random_dag(n, 0.5, derive_seed(seed, attempt));
      if (is_connected(g)) return g;
    }
  };
  auto mu_of = [](const Graph& g) {
    return compute_mu(g, sources_and_sinks(g), {}).mu;
  };
  auto mu_with = [](const Graph& g, const MonitorPlacement& chi) {
    return compute_mu(g, chi, {}).mu;
  };
  auto check_pullback = [&](const NodeMap& f, const Graph& g, const Graph& h,
                            std::uint64_t seed) {
    // inverse images of target edges inside the image are source edges
    std::vector<std::int64_t> inverse(h.node_count(), -1);
    for (NodeId u = 0; u < f.mapping.size(); ++u) inverse[f(u)] = u;
    for (const Edge& e : h.edges()) {
      if (inverse[e.first] < 0 || inverse[e.second] < 0) continue;
      bool pulled =
          g.has_edge(NodeId(inverse[e.first]), NodeId(inverse[e.second]));
      if (!pulled)
        dump_counterexample("edge-pullback",
                            Json{{"seed", seed},
                                 {"edge", {e.first, e.second}},
                                 {"g", graph_to_json(g)},
                                 {"h", graph_to_json(h)}});
      EXPECT_TRUE(pulled) << "seed=" << seed;
    }
  };

  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::size_t n = 3 + seed % 5;  // 3..7 nodes
    Graph g = connected_dag(seed, n);

    switch (seed % 4) {
      case 0: {
        // relabeled copy: a distance-preserving bijection must exist
        std::vector<NodeId> perm(n);
        for (NodeId u = 0; u < n; ++u) perm[u] = u;
        Rng rng(derive_seed(seed, 99));
        for (std::size_t i = n; i > 1; --i)
          std::swap(perm[i - 1], perm[rng.below(i)]);
        Graph h = Graph::directed(n);
        for (const Edge& e : g.edges()) h.add_edge(perm[e.first],
                                                   perm[e.second]);
        auto f = find_embedding(g, h, EmbeddingKind::DistancePreserving);
        ASSERT_TRUE(f.has_value()) << "seed=" << seed;
        ++pairs_with_embedding;
        EXPECT_TRUE(is_order_embedding(*f, g, h));
        EmbeddingClass cls = classify_embedding(*f, g, h);
        EXPECT_TRUE(cls.distance_preserving);
        check_pullback(*f, g, h, seed);
        std::size_t mu_g = mu_with(g, sources_and_sinks(g));
        std::size_t mu_h =
            mu_with(h, push_forward_placement(*f, sources_and_sinks(g)));
        if (mu_g != mu_h)
          dump_counterexample("distance-preserving-equality",
                              Json{{"seed", seed},
                                   {"mu_g", mu_g},
                                   {"mu_h", mu_h},
                                   {"g", graph_to_json(g)},
                                   {"h", graph_to_json(h)},
                                   {"map", node_map_to_json(*f)}});
        EXPECT_EQ(mu_g, mu_h) << "seed=" << seed;
        break;
      }
      case 1: {
        // closure: the identity embeds G* into G distance-increasingly,
        // so the closure never loses identifiability
        Graph closed = transitive_closure(g);
        NodeMap id;
        id.mapping.resize(n);
        for (NodeId u = 0; u < n; ++u) id.mapping[u] = u;
        id.bijective = true;
        ASSERT_TRUE(is_order_embedding(id, closed, g));
        EXPECT_TRUE(classify_embedding(id, closed, g).distance_increasing);
        ++pairs_with_embedding;
        check_pullback(id, closed, g, seed);
        std::size_t mu_closed = mu_of(closed), mu_g = mu_of(g);
        if (mu_closed < mu_g)
          dump_counterexample("closure-monotonicity",
                              Json{{"seed", seed},
                                   {"mu_closed", mu_closed},
                                   {"mu_g", mu_g},
                                   {"g", graph_to_json(g)}});
        EXPECT_GE(mu_closed, mu_g) << "seed=" << seed;
        break;
      }
      case 2: {
        // graph powers, k = 2 and 3
        for (int k : {2, 3}) {
          Graph powered = graph_power(g, k);
          NodeMap id;
          id.mapping.resize(n);
          for (NodeId u = 0; u < n; ++u) id.mapping[u] = u;
          id.bijective = true;
          ASSERT_TRUE(is_order_embedding(id, powered, g));
          EXPECT_TRUE(classify_embedding(id, powered, g).distance_increasing);
          std::size_t mu_pow = mu_of(powered), mu_g = mu_of(g);
          if (mu_pow < mu_g)
            dump_counterexample("power-monotonicity",
                                Json{{"seed", seed},
                                     {"k", k},
                                     {"mu_pow", mu_pow},
                                     {"mu_g", mu_g},
                                     {"g", graph_to_json(g)}});
          EXPECT_GE(mu_pow, mu_g) << "seed=" << seed << " k=" << k;
        }
        ++pairs_with_embedding;
        break;
      }
      case 3: {
        // routing-consistent source (a tree) embedded into itself plus
        // random shortcut edges: upper bounds transfer forward
        TreeSpec spec = random_tree(n, TreeOrientation::Downward,
                                    derive_seed(seed, 5));
        Graph t = gen_tree(spec);
        PathIndex idx = enumerate_csp_paths(t, sources_and_sinks(t));
        ASSERT_TRUE(is_routing_consistent(idx));
        Graph closed = transitive_closure(t);
        Graph enriched = t;
        Rng rng(derive_seed(seed, 6));
        for (const Edge& e : closed.edges())
          if (!enriched.has_edge(e.first, e.second) && rng.below(2))
            enriched.add_edge(e.first, e.second);
        NodeMap id;
        id.mapping.resize(n);
        for (NodeId u = 0; u < n; ++u) id.mapping[u] = u;
        id.bijective = true;
        ASSERT_TRUE(is_order_embedding(id, t, enriched));
        ++pairs_with_embedding;
        std::size_t mu_t = mu_of(t);
        std::size_t mu_enriched =
            mu_with(enriched, push_forward_placement(
                                  id, sources_and_sinks(t)));
        if (mu_t > mu_enriched)
          dump_counterexample("routing-consistent-transfer",
                              Json{{"seed", seed},
                                   {"mu_t", mu_t},
                                   {"mu_enriched", mu_enriched},
                                   {"t", graph_to_json(t)},
                                   {"enriched", graph_to_json(enriched)}});
        EXPECT_LE(mu_t, mu_enriched) << "seed=" << seed;
        break;
      }
    }
  }
  EXPECT_GE(pairs_with_embedding, 150u);
}

// Criterion 12: measurement uniqueness coupling on the main instances.
TEST_F(Acceptance, Criterion12_MeasurementUniqueness) {
  struct Instance {
    Graph g;
    MonitorPlacement chi;
    std::string tag;
  };
  std::vector<Instance> instances;
  for (int n : {3, 4})
    instances.push_back({gen_hypergrid(n, 2, true).graph, chi_grid(n, 2),
                         "dir-grid"});
  instances.push_back(
      {gen_hypergrid(3, 3, true).graph, chi_grid(3, 3), "dir-cube"});
  for (TreeOrientation orient :
       {TreeOrientation::Downward, TreeOrientation::Upward}) {
    Graph t = gen_tree(complete_binary_tree(3, orient));
    instances.push_back({t, chi_tree(t), "tree"});
  }
  for (int n : {3, 4}) {
    auto hg = gen_hypergrid(n, 2, false);
    instances.push_back(
        {hg.graph, random_placement(hg.graph, 2, 2, std::uint64_t(n)),
         "und-grid"});
  }

  for (const auto& inst : instances) {
    PathIndex idx = enumerate_csp_paths(inst.g, inst.chi);
    std::size_t mu = compute_mu(inst.g, inst.chi, {}).mu;
    if (mu == 0) continue;  // nothing to couple
    std::vector<NodeId> covered = idx.covered_nodes().to_vector();
    Rng rng(derive_seed(777, inst.g.node_count()));
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t size = std::size_t(rng.below(mu + 1));
      std::vector<NodeId> pool = covered, f;
      for (std::size_t i = 0; i < size; ++i) {
        std::size_t j = std::size_t(rng.below(pool.size()));
        f.push_back(pool[j]);
        pool.erase(pool.begin() + std::ptrdiff_t(j));
      }
      std::sort(f.begin(), f.end());
      Bitset b = simulate_measurement(idx, f);
      ConsistentSets sol = consistent_failure_sets(idx, b, mu);
      ASSERT_EQ(sol.solutions.size(), 1u)
          << inst.tag << " trial=" << trial;
      EXPECT_EQ(sol.solutions[0], f) << inst.tag << " trial=" << trial;
    }
  }
}

// Criterion 13: byte-identical outputs across repeated runs and across
// worker counts, in-process and through the CLI.
TEST_F(Acceptance, Criterion13_Determinism) {
  // in-process: reports and campaign tables
  auto render_mu = [](unsigned workers) {
    auto hg = gen_hypergrid(4, 2, true);
    MuOptions o;
    o.workers = workers;
    Json j;
    j["report"] = ident_report_to_json(compute_mu(hg.graph, chi_grid(4, 2),
                                                  o));
    j["bounds"] = bounds_to_json(bounds_report(hg.graph, chi_grid(4, 2)));
    return j.dump(2);
  };
  EXPECT_EQ(render_mu(1), render_mu(1));
  EXPECT_EQ(render_mu(1), render_mu(8));

  auto render_walk = [](unsigned workers) {
    auto hg = gen_hypergrid(3, 3, true);
    MuOptions o;
    o.scheme = RoutingScheme::CapMinus;
    o.workers = workers;
    return ident_report_to_json(compute_mu(hg.graph, chi_grid(3, 3), o))
        .dump();
  };
  EXPECT_EQ(render_walk(1), render_walk(8));

  auto render_campaign = [](unsigned workers) {
    MuOptions o;
    o.workers = workers;
    return agrid_campaign(er_source(8, 0.3, true), DRule::log_n(), 6, 99, o)
        .to_csv();
  };
  EXPECT_EQ(render_campaign(1), render_campaign(1));
  EXPECT_EQ(render_campaign(1), render_campaign(8));

  auto render_monitors = [](unsigned workers) {
    auto hg = gen_hypergrid(4, 2, false);
    MuOptions o;
    o.workers = workers;
    return random_monitor_campaign(hg.graph, 2, 2, 8, 31, o).to_csv();
  };
  EXPECT_EQ(render_monitors(1), render_monitors(8));

  // through the CLI binary (TOMO_BIN overrides the built-in location)
  const char* tomo = std::getenv("TOMO_BIN");
  if (!tomo) tomo = TOMO_BIN_DEFAULT;
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args, const std::string& out) {
    std::string cmd = std::string(tomo) + " " + args + " --out " + out +
                      " 2>/dev/null";
    return std::system(cmd.c_str());
  };
  std::string base = ::testing::TempDir();
  ASSERT_EQ(run("mu --gen hypergrid:n=4,d=2,directed --chi grid --scheme csp",
                base + "mu1.json"),
            0);
  ASSERT_EQ(run("mu --gen hypergrid:n=4,d=2,directed --chi grid --scheme csp",
                base + "mu2.json"),
            0);
  EXPECT_EQ(slurp(base + "mu1.json"), slurp(base + "mu2.json"));
  EXPECT_FALSE(slurp(base + "mu1.json").empty());

  ASSERT_EQ(run("mu --gen hypergrid:n=4,d=2,directed --chi grid --scheme csp "
                "--workers 8",
                base + "mu8.json"),
            0);
  EXPECT_EQ(slurp(base + "mu1.json"), slurp(base + "mu8.json"));

  // placement files round-trip through the CLI too
  {
    std::ofstream chi_file(base + "chi.json");
    chi_file << placement_to_json(mdmp(load_fixture("eunetworks.graphml"), 3))
             << "\n";
  }
  ASSERT_EQ(run("mu --in " + std::string(BNT_DATA_DIR) +
                    "/eunetworks.graphml --chi " + base + "chi.json",
                base + "mu_chi1.json"),
            0);
  ASSERT_EQ(run("mu --in " + std::string(BNT_DATA_DIR) +
                    "/eunetworks.graphml --chi " + base + "chi.json",
                base + "mu_chi2.json"),
            0);
  EXPECT_EQ(slurp(base + "mu_chi1.json"), slurp(base + "mu_chi2.json"));
  EXPECT_NE(slurp(base + "mu_chi1.json").find("\"mu\": 0"),
            std::string::npos);

  ASSERT_EQ(run("experiment --family agrid --er-n 8 --er-p 0.3 --runs 5 "
                "--seed 9 --workers 1",
                base + "exp1.csv"),
            0);
  ASSERT_EQ(run("experiment --family agrid --er-n 8 --er-p 0.3 --runs 5 "
                "--seed 9 --workers 8",
                base + "exp2.csv"),
            0);
  EXPECT_EQ(slurp(base + "exp1.csv"), slurp(base + "exp2.csv"));
  EXPECT_FALSE(slurp(base + "exp1.csv").empty());
}

// Auxiliary contract check (not a numbered criterion): the CLI's exit
// codes distinguish domain errors, budget exhaustion and parse failures.
TEST_F(Acceptance, CliExitCodeContract) {
  const char* tomo = std::getenv("TOMO_BIN");
  if (!tomo) tomo = TOMO_BIN_DEFAULT;
  auto run_status = [&](const std::string& args) {
    std::string cmd =
        std::string(tomo) + " " + args + " >/dev/null 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run_status("mu --gen hypergrid:n=3,d=2,directed --chi grid"), 0);
  EXPECT_EQ(run_status("mu --gen hypergrid:n=2,d=2,directed --chi grid"), 2);
  EXPECT_EQ(run_status("mu --gen er:n=6,p=0.4 --chi mdmp:d=2 --seed 5"), 0);
  EXPECT_EQ(run_status("mu --gen er:n=6,p=0.4 --chi mdmp:d=2"), 2);
  EXPECT_EQ(run_status("mu --gen hypergrid:n=4,d=2,directed --chi grid "
                       "--path-budget 3"),
            3);
  std::string bad = ::testing::TempDir() + "broken.graphml";
  {
    std::ofstream out(bad);
    out << "<graphml><graph edgedefault=\"undirected\">\n<node id=\"a\"/>\n"
           "<edge source=\"a\" target=\"ghost\"/>\n</graph></graphml>\n";
  }
  EXPECT_EQ(run_status("mu --in " + bad + " --chi mdmp:d=1"), 4);
}

}  // namespace
