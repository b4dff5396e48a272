#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bnt/agrid.hpp"
#include "bnt/graph.hpp"
#include "bnt/identifiability.hpp"
#include "bnt/monitors.hpp"
#include "bnt/rng.hpp"
#include "bnt/topology.hpp"

namespace bnt {

// ---------------------------------------------------------------------------
// Dimension rules
// ---------------------------------------------------------------------------

struct DRule {
  enum class Kind { LogN, SqrtLogN, Fixed } kind = Kind::LogN;
  int fixed = 0;
  /// When the rule lands at or below the existing minimal degree the
  /// augmentation would change nothing; this bump adds one dimension.
  bool bump_when_trivial = false;

  static DRule log_n() { return DRule{Kind::LogN, 0, false}; }
  static DRule sqrt_log_n() { return DRule{Kind::SqrtLogN, 0, false}; }
  static DRule fixed_d(int d) { return DRule{Kind::Fixed, d, false}; }

  int evaluate(const Graph& g) const {
    int d = 0;
    switch (kind) {
      case Kind::LogN: {
        // smallest d with 2^d >= n, i.e. ceil(log2 n), computed exactly
        std::size_t n = g.node_count();
        std::size_t p = 1;
        while (p < n) {
          p *= 2;
          ++d;
        }
        break;
      }
      case Kind::SqrtLogN:
        d = int(std::ceil(
            std::sqrt(std::log2(double(std::max<std::size_t>(
                g.node_count(), 2))))));
        break;
      case Kind::Fixed:
        d = fixed;
        break;
    }
    d = std::max(d, 1);
    if (bump_when_trivial) {
      std::size_t dmin = SIZE_MAX;
      for (NodeId u = 0; u < g.node_count(); ++u)
        dmin = std::min(dmin, g.degree(u));
      if (std::size_t(d) <= dmin) ++d;
    }
    return d;
  }
};

// ---------------------------------------------------------------------------
// Campaigns
// ---------------------------------------------------------------------------

using GraphSource = std::function<Graph(std::uint64_t run_seed)>;

/// Seeded Erdos–Renyi source; optionally resamples (new derived seeds)
/// until the draw is connected.
inline GraphSource er_source(std::size_t n, double p, bool require_connected) {
  return [=](std::uint64_t run_seed) {
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
      Graph g = gen_erdos_renyi(n, p, derive_seed(run_seed, attempt), false);
      if (!require_connected || is_connected(g)) return g;
    }
    throw DomainError("er_source: no connected draw in 1000 attempts");
  };
}

inline GraphSource fixed_source(Graph g) {
  return [g = std::move(g)](std::uint64_t) { return g; };
}

struct AgridRunRow {
  std::size_t run = 0;
  std::size_t n = 0;
  int d = 0;
  std::size_t mu_g = 0;
  std::size_t mu_ga = 0;
  std::size_t delta_g = 0;
  std::size_t delta_ga = 0;
  std::size_t edges_added = 0;
  std::size_t paths_g = 0;
  std::size_t paths_ga = 0;
  std::uint64_t seed = 0;
};

struct AgridCampaign {
  std::vector<AgridRunRow> rows;
  std::size_t failed_runs = 0;
  std::vector<std::string> failures;

  std::size_t count_gt() const { return count([](auto& r) { return r.mu_ga > r.mu_g; }); }
  std::size_t count_eq() const { return count([](auto& r) { return r.mu_ga == r.mu_g; }); }
  std::size_t count_lt() const { return count([](auto& r) { return r.mu_ga < r.mu_g; }); }
  std::size_t max_increment() const {
    std::size_t best = 0;
    for (const auto& r : rows)
      if (r.mu_ga > r.mu_g) best = std::max(best, r.mu_ga - r.mu_g);
    return best;
  }

  static std::string csv_header() {
    return "run,n,d,mu_g,mu_ga,delta_g,delta_ga,edges_added,paths_g,"
           "paths_ga,seed";
  }
  std::string to_csv() const {
    std::ostringstream out;
    out << csv_header() << "\n";
    for (const auto& r : rows) {
      out << r.run << ',' << r.n << ',' << r.d << ',' << r.mu_g << ','
          << r.mu_ga << ',' << r.delta_g << ',' << r.delta_ga << ','
          << r.edges_added << ',' << r.paths_g << ',' << r.paths_ga << ','
          << r.seed << "\n";
    }
    return out.str();
  }

 private:
  template <typename Pred>
  std::size_t count(Pred p) const {
    std::size_t c = 0;
    for (const auto& r : rows) c += p(r);
    return c;
  }
};

/// One augmentation experiment per run: draw or load G, evaluate the
/// dimension rule, run the booster, and compare identifiability before and
/// after with minimal-degree monitors on both sides. Runs whose search
/// fails (budget, degenerate placements) are skipped and counted.
inline AgridCampaign agrid_campaign(const GraphSource& source,
                                    const DRule& rule, std::size_t runs,
                                    std::uint64_t seed,
                                    const MuOptions& mu_opts = {}) {
  if (runs < 1) throw DomainError("agrid_campaign: runs must be >= 1");
  AgridCampaign table;
  for (std::size_t run = 0; run < runs; ++run) {
    std::uint64_t run_seed = derive_seed(seed, run);
    try {
      Graph g = source(run_seed);
      int d = rule.evaluate(g);
      AgridResult boosted = agrid(g, d, derive_seed(run_seed, 1));
      MonitorPlacement chi_g = mdmp(g, d);

      MuOptions opts = mu_opts;
      PathIndex idx_g = enumerate_csp_paths(g, chi_g, opts.path_budget);
      PathIndex idx_ga =
          enumerate_csp_paths(boosted.augmented, boosted.placement,
                              opts.path_budget);
      IdentReport rep_g = compute_mu(g, chi_g, opts);
      IdentReport rep_ga = compute_mu(boosted.augmented, boosted.placement,
                                      opts);

      AgridRunRow row;
      row.run = run;
      row.n = g.node_count();
      row.d = d;
      row.mu_g = rep_g.mu;
      row.mu_ga = rep_ga.mu;
      row.delta_g = degree_stats(g).delta_min;
      row.delta_ga = degree_stats(boosted.augmented).delta_min;
      row.edges_added = boosted.added_edges.size();
      row.paths_g = idx_g.path_count();
      row.paths_ga = idx_ga.path_count();
      row.seed = run_seed;
      table.rows.push_back(row);
    } catch (const std::exception& e) {
      ++table.failed_runs;
      table.failures.push_back("run " + std::to_string(run) + ": " +
                               e.what());
    }
  }
  return table;
}

struct RandomMonitorRow {
  std::size_t run = 0;
  std::size_t n = 0;
  std::size_t k_in = 0;
  std::size_t k_out = 0;
  std::string scheme;
  std::size_t mu = 0;
  std::uint64_t seed = 0;
};

struct RandomMonitorCampaign {
  std::vector<RandomMonitorRow> rows;
  std::size_t failed_runs = 0;
  std::vector<std::string> failures;

  static std::string csv_header() { return "run,n,k_in,k_out,scheme,mu,seed"; }
  std::string to_csv() const {
    std::ostringstream out;
    out << csv_header() << "\n";
    for (const auto& r : rows)
      out << r.run << ',' << r.n << ',' << r.k_in << ',' << r.k_out << ','
          << r.scheme << ',' << r.mu << ',' << r.seed << "\n";
    return out.str();
  }
};

/// Identifiability under freshly drawn monitor placements, one per run.
inline RandomMonitorCampaign random_monitor_campaign(
    const Graph& g, std::size_t k_in, std::size_t k_out, std::size_t runs,
    std::uint64_t seed, const MuOptions& mu_opts = {}) {
  RandomMonitorCampaign table;
  for (std::size_t run = 0; run < runs; ++run) {
    std::uint64_t run_seed = derive_seed(seed, run);
    try {
      MonitorPlacement chi = random_placement(g, k_in, k_out, run_seed);
      IdentReport rep = compute_mu(g, chi, mu_opts);
      table.rows.push_back(RandomMonitorRow{run, g.node_count(), k_in, k_out,
                                            to_string(mu_opts.scheme), rep.mu,
                                            run_seed});
    } catch (const std::exception& e) {
      ++table.failed_runs;
      table.failures.push_back("run " + std::to_string(run) + ": " +
                               e.what());
    }
  }
  return table;
}

struct TruncatedRow {
  std::size_t run = 0;
  std::size_t n = 0;
  int d = 0;
  std::size_t alpha_g = 0;
  std::size_t mu_alpha_g = 0;
  std::size_t alpha_ga = 0;
  std::size_t mu_alpha_ga = 0;
  std::uint64_t seed = 0;
};

struct TruncatedCampaign {
  std::vector<TruncatedRow> rows;
  std::size_t failed_runs = 0;
  std::vector<std::string> failures;

  static std::string csv_header() {
    return "run,n,d,alpha_g,mu_alpha_g,alpha_ga,mu_alpha_ga,seed";
  }
  std::string to_csv() const {
    std::ostringstream out;
    out << csv_header() << "\n";
    for (const auto& r : rows)
      out << r.run << ',' << r.n << ',' << r.d << ',' << r.alpha_g << ','
          << r.mu_alpha_g << ',' << r.alpha_ga << ',' << r.mu_alpha_ga << ','
          << r.seed << "\n";
    return out.str();
  }
};

/// Truncation level: the average degree rounded half away from zero, and
/// at least 1.
inline std::size_t truncation_alpha(const Graph& g) {
  auto avg = degree_stats(g).average_degree;
  return std::size_t(std::max<std::int64_t>(1, avg.rounded()));
}

/// Truncated-identifiability comparison across fresh augmentations of one
/// base network: each run re-randomizes the booster, truncating both
/// searches at the respective average degrees.
inline TruncatedCampaign truncated_campaign(const Graph& g, const DRule& rule,
                                            std::size_t runs,
                                            std::uint64_t seed,
                                            const MuOptions& mu_opts = {}) {
  TruncatedCampaign table;
  int d = rule.evaluate(g);
  for (std::size_t run = 0; run < runs; ++run) {
    std::uint64_t run_seed = derive_seed(seed, run);
    try {
      AgridResult boosted = agrid(g, d, run_seed);
      MonitorPlacement chi_g = mdmp(g, d);
      std::size_t alpha_g = truncation_alpha(g);
      std::size_t alpha_ga = truncation_alpha(boosted.augmented);

      MuOptions opts = mu_opts;
      IdentReport rep_g =
          compute_mu_truncated(g, chi_g, opts.scheme, alpha_g, opts);
      IdentReport rep_ga = compute_mu_truncated(
          boosted.augmented, boosted.placement, opts.scheme, alpha_ga, opts);

      table.rows.push_back(TruncatedRow{run, g.node_count(), d, alpha_g,
                                        rep_g.mu, alpha_ga, rep_ga.mu,
                                        run_seed});
    } catch (const std::exception& e) {
      ++table.failed_runs;
      table.failures.push_back("run " + std::to_string(run) + ": " +
                               e.what());
    }
  }
  return table;
}

}  // namespace bnt
