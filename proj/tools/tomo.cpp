// tomo: command-line surface for the tomography toolkit.
//
// Subcommands: mu, bounds, paths, experiment. Graphs come from --gen
// (hypergrid / tree / er) or --in (GraphML); placements from --chi
// (grid / tree / mdmp:d=K / random:in=A,out=B / file.json). All randomized
// commands require an explicit --seed and are bit-reproducible. Logs go to
// stderr, data to stdout or --out. Exit codes: 0 ok, 2 domain error,
// 3 path budget exceeded, 4 input parse error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bnt/agrid.hpp"
#include "bnt/embedding.hpp"
#include "bnt/experiments.hpp"
#include "bnt/graphml.hpp"
#include "bnt/identifiability.hpp"
#include "bnt/serialize.hpp"
#include "bnt/topology.hpp"

namespace {

using namespace bnt;

struct KvSpec {
  std::string head;
  std::map<std::string, std::string> kv;
  std::vector<std::string> flags;
};

KvSpec parse_spec(const std::string& text) {
  KvSpec spec;
  std::string rest = text;
  if (auto colon = rest.find(':'); colon != std::string::npos) {
    spec.head = rest.substr(0, colon);
    rest = rest.substr(colon + 1);
  } else {
    spec.head = rest;
    rest.clear();
  }
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (auto eq = item.find('='); eq != std::string::npos)
      spec.kv[item.substr(0, eq)] = item.substr(eq + 1);
    else
      spec.flags.push_back(item);
  }
  return spec;
}

long long want_int(const KvSpec& s, const std::string& key) {
  auto it = s.kv.find(key);
  if (it == s.kv.end())
    throw DomainError("missing '" + key + "' in spec '" + s.head + "'");
  return std::stoll(it->second);
}

bool has_flag(const KvSpec& s, const std::string& f) {
  for (const auto& x : s.flags)
    if (x == f) return true;
  return false;
}

struct GraphOptions {
  std::string gen;
  std::string input_file;
  std::optional<std::uint64_t> seed;
};

struct LoadedGraph {
  Graph graph;
  std::optional<HypergridGraph> hypergrid;
  bool randomized = false;
};

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (!seed) throw DomainError("this command draws randomness; pass --seed");
  return *seed;
}

LoadedGraph load_graph(const GraphOptions& opt) {
  if (opt.gen.empty() == opt.input_file.empty())
    throw DomainError("exactly one of --gen / --in is required");
  if (!opt.input_file.empty()) {
    IngestResult r = ingest_graphml_file(opt.input_file);
    if (r.self_loops_dropped || r.multi_edges_collapsed)
      std::cerr << "ingest: dropped " << r.self_loops_dropped
                << " self-loops, collapsed " << r.multi_edges_collapsed
                << " multi-edges\n";
    return LoadedGraph{std::move(r.graph), std::nullopt, false};
  }
  KvSpec spec = parse_spec(opt.gen);
  if (spec.head == "hypergrid") {
    bool directed = has_flag(spec, "directed");
    auto hg = gen_hypergrid(int(want_int(spec, "n")), int(want_int(spec, "d")),
                            directed);
    Graph g = hg.graph;
    return LoadedGraph{std::move(g), std::move(hg), false};
  }
  if (spec.head == "tree") {
    TreeOrientation orient = TreeOrientation::Downward;
    if (has_flag(spec, "upward")) orient = TreeOrientation::Upward;
    if (has_flag(spec, "undirected")) orient = TreeOrientation::Undirected;
    if (has_flag(spec, "complete-binary") || spec.kv.count("depth"))
      return LoadedGraph{
          gen_tree(complete_binary_tree(int(want_int(spec, "depth")), orient)),
          std::nullopt, false};
    if (has_flag(spec, "random"))
      return LoadedGraph{
          gen_tree(random_tree(std::size_t(want_int(spec, "n")), orient,
                               require_seed(opt.seed))),
          std::nullopt, true};
    throw DomainError("tree spec needs 'complete-binary,depth=K' or "
                      "'random,n=K'");
  }
  if (spec.head == "er") {
    if (!spec.kv.count("p"))
      throw DomainError("missing 'p' in spec 'er'");
    double p = std::stod(spec.kv.at("p"));
    return LoadedGraph{
        gen_erdos_renyi(std::size_t(want_int(spec, "n")), p,
                        require_seed(opt.seed), has_flag(spec, "directed")),
        std::nullopt, true};
  }
  throw DomainError("unknown generator '" + spec.head + "'");
}

MonitorPlacement load_placement(const std::string& chi_spec,
                                const LoadedGraph& lg,
                                const std::optional<std::uint64_t>& seed) {
  if (chi_spec.empty()) throw DomainError("--chi is required");
  if (chi_spec.size() > 5 &&
      chi_spec.substr(chi_spec.size() - 5) == ".json")
    return placement_from_file(chi_spec);
  KvSpec spec = parse_spec(chi_spec);
  if (spec.head == "grid") {
    if (!lg.hypergrid)
      throw DomainError("--chi grid needs a --gen hypergrid graph");
    return chi_grid(lg.hypergrid->n, lg.hypergrid->d);
  }
  if (spec.head == "tree") return chi_tree(lg.graph);
  if (spec.head == "mdmp") return mdmp(lg.graph, int(want_int(spec, "d")));
  if (spec.head == "random")
    return random_placement(lg.graph, std::size_t(want_int(spec, "in")),
                            std::size_t(want_int(spec, "out")),
                            derive_seed(require_seed(seed), 0x9d));
  throw DomainError("unknown placement spec '" + spec.head + "'");
}

RoutingScheme parse_scheme(const std::string& s) {
  if (s == "csp") return RoutingScheme::Csp;
  if (s == "cap-") return RoutingScheme::CapMinus;
  if (s == "cap") return RoutingScheme::Cap;
  throw DomainError("unknown scheme '" + s + "' (csp, cap-, cap)");
}

DRule parse_d_rule(const std::string& s, bool bump) {
  DRule rule;
  if (s == "log")
    rule = DRule::log_n();
  else if (s == "sqrtlog")
    rule = DRule::sqrt_log_n();
  else if (s.rfind("fixed:", 0) == 0)
    rule = DRule::fixed_d(std::stoi(s.substr(6)));
  else
    throw DomainError("unknown --d-rule '" + s + "' (log, sqrtlog, fixed:k)");
  rule.bump_when_trivial = bump;
  return rule;
}

void emit(const std::string& data, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + out_path);
  out << data;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean network tomography toolkit"};
  app.require_subcommand(1);

  GraphOptions gopt;
  std::string chi_spec, scheme_name = "csp", out_path, d_rule_name = "log";
  std::string family = "agrid";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> alpha, k_cap;
  std::size_t path_budget = default_path_budget();
  unsigned workers = 1;
  std::size_t runs = 1, k_in = 2, k_out = 2, er_n = 8;
  double er_p = 0.3;
  bool bump_d = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--gen", gopt.gen,
                    "generator spec: hypergrid:n=,d=[,directed] | "
                    "tree:complete-binary,depth=[,upward|undirected] | "
                    "tree:random,n= | er:n=,p=[,directed]");
    cmd->add_option("--in", gopt.input_file, "GraphML input file");
    cmd->add_option("--chi", chi_spec,
                    "placement: grid | tree | mdmp:d= | random:in=,out= | "
                    "placement.json");
    cmd->add_option("--seed", seed, "seed for randomized steps");
    cmd->add_option("--out", out_path, "write data here instead of stdout");
  };

  CLI::App* cmd_mu = app.add_subcommand("mu", "compute maximal identifiability");
  add_common(cmd_mu);
  cmd_mu->add_option("--scheme", scheme_name, "csp | cap- | cap");
  cmd_mu->add_option("--alpha", alpha, "truncate both set sizes at alpha");
  cmd_mu->add_option("--k-cap", k_cap, "verify at most this many levels");
  cmd_mu->add_option("--path-budget", path_budget, "CSP enumeration budget");
  cmd_mu->add_option("--workers", workers, "parallel search workers");

  CLI::App* cmd_bounds =
      app.add_subcommand("bounds", "structural upper bounds");
  add_common(cmd_bounds);

  CLI::App* cmd_paths =
      app.add_subcommand("paths", "dump enumerated measurement paths");
  add_common(cmd_paths);
  cmd_paths->add_option("--path-budget", path_budget, "enumeration budget");

  CLI::App* cmd_exp = app.add_subcommand("experiment", "campaign tables");
  add_common(cmd_exp);
  cmd_exp->add_option("--family", family,
                      "agrid | random-monitors | truncated");
  cmd_exp->add_option("--scheme", scheme_name, "csp | cap- | cap");
  cmd_exp->add_option("--d-rule", d_rule_name, "log | sqrtlog | fixed:k");
  cmd_exp->add_flag("--bump-d", bump_d,
                    "add one dimension when the rule lands at or below the "
                    "current minimal degree");
  cmd_exp->add_option("--runs", runs, "number of runs");
  cmd_exp->add_option("--k-in", k_in, "random-monitors: inputs per run");
  cmd_exp->add_option("--k-out", k_out, "random-monitors: outputs per run");
  cmd_exp->add_option("--er-n", er_n, "agrid family on ER graphs: nodes");
  cmd_exp->add_option("--er-p", er_p, "agrid family on ER graphs: edge prob");
  cmd_exp->add_option("--path-budget", path_budget, "CSP enumeration budget");
  cmd_exp->add_option("--workers", workers, "parallel search workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  gopt.seed = seed;

  try {
    if (cmd_mu->parsed()) {
      LoadedGraph lg = load_graph(gopt);
      MonitorPlacement chi = load_placement(chi_spec, lg, seed);
      MuOptions opts;
      opts.scheme = parse_scheme(scheme_name);
      opts.alpha = alpha;
      opts.k_cap = k_cap;
      opts.path_budget = path_budget;
      opts.workers = workers;
      IdentReport report = compute_mu(lg.graph, chi, opts);
      Json j;
      j["report"] = ident_report_to_json(report);
      j["bounds"] = bounds_to_json(bounds_report(lg.graph, chi));
      emit(j.dump(2) + "\n", out_path);
    } else if (cmd_bounds->parsed()) {
      LoadedGraph lg = load_graph(gopt);
      MonitorPlacement chi = load_placement(chi_spec, lg, seed);
      Json j;
      j["bounds"] = bounds_to_json(bounds_report(lg.graph, chi));
      bool is_tree = !lg.graph.is_directed() &&
                     lg.graph.edge_count() + 1 == lg.graph.node_count() &&
                     is_connected(lg.graph);
      if (is_tree) {
        BalanceReport br = monitor_balance_report(lg.graph, chi);
        j["monitor_balanced"] = br.balanced;
        j["balance_witness"] =
            br.witness ? Json(*br.witness) : Json(nullptr);
      } else {
        j["monitor_balanced"] = nullptr;
      }
      emit(j.dump(2) + "\n", out_path);
    } else if (cmd_paths->parsed()) {
      LoadedGraph lg = load_graph(gopt);
      MonitorPlacement chi = load_placement(chi_spec, lg, seed);
      PathIndex idx = enumerate_csp_paths(lg.graph, chi, path_budget);
      std::ostringstream out;
      for (const auto& p : idx.paths) {
        for (std::size_t i = 0; i < p.size(); ++i)
          out << (i ? " " : "") << p[i];
        out << "\n";
      }
      emit(out.str(), out_path);
    } else if (cmd_exp->parsed()) {
      std::uint64_t s = require_seed(seed);
      MuOptions opts;
      opts.scheme = parse_scheme(scheme_name);
      opts.path_budget = path_budget;
      opts.workers = workers;
      std::string csv;
      std::size_t failed = 0;
      std::vector<std::string> failures;
      if (family == "agrid") {
        GraphSource source =
            gopt.input_file.empty() && gopt.gen.empty()
                ? er_source(er_n, er_p, true)
                : fixed_source(load_graph(gopt).graph);
        AgridCampaign table = agrid_campaign(
            source, parse_d_rule(d_rule_name, bump_d), runs, s, opts);
        csv = table.to_csv();
        failed = table.failed_runs;
        failures = table.failures;
      } else if (family == "random-monitors") {
        LoadedGraph lg = load_graph(gopt);
        RandomMonitorCampaign table =
            random_monitor_campaign(lg.graph, k_in, k_out, runs, s, opts);
        csv = table.to_csv();
        failed = table.failed_runs;
        failures = table.failures;
      } else if (family == "truncated") {
        LoadedGraph lg = load_graph(gopt);
        TruncatedCampaign table = truncated_campaign(
            lg.graph, parse_d_rule(d_rule_name, bump_d), runs, s, opts);
        csv = table.to_csv();
        failed = table.failed_runs;
        failures = table.failures;
      } else {
        throw DomainError("unknown --family '" + family + "'");
      }
      emit(csv, out_path);
      for (const auto& f : failures) std::cerr << "failed " << f << "\n";
      if (failed > 0) {
        std::cerr << failed << " run(s) failed\n";
        return 2;
      }
    }
    return 0;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << " (" << e.partial_count()
              << " paths emitted)\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line()) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
