#pragma once

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bnt/bitset.hpp"
#include "bnt/graph.hpp"
#include "bnt/monitors.hpp"
#include "bnt/paths.hpp"

namespace bnt {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Structural upper bounds
// ---------------------------------------------------------------------------

struct BoundsReport {
  /// max(|inputs|,|outputs|) - 1; valid under CSP routing only.
  std::size_t monitor_bound = 0;
  /// delta(G) for undirected graphs; the directed refinement over the
  /// complex/simple-source partition for directed ones.
  std::size_t degree_bound = 0;
  /// min{n, ceil(2m/n)}.
  std::size_t edge_bound = 0;
  bool line_free = false;
};

inline BoundsReport bounds_report(const Graph& g,
                                  const MonitorPlacement& chi) {
  if (!is_connected(g)) throw DomainError("bounds_report: graph disconnected");
  chi.validate_against(g);
  const std::size_t n = g.node_count();
  BoundsReport r;
  r.monitor_bound =
      std::max(chi.inputs.size(), chi.outputs.size()) - 1;

  if (!g.is_directed()) {
    std::size_t dmin = SIZE_MAX;
    for (NodeId u = 0; u < n; ++u) dmin = std::min(dmin, g.degree(u));
    r.degree_bound = (dmin == SIZE_MAX) ? 0 : dmin;
    r.line_free = is_line_free(g);
  } else {
    // A node in the input set is a complex source when it still has
    // in-edges, a simple source otherwise; everything unmonitored-by-input
    // is bounded through its in-degree alone.
    Bitset in_set = chi.input_set(n);
    std::size_t best = SIZE_MAX;
    for (NodeId u = 0; u < n; ++u) {
      if (in_set.test(u)) {
        if (g.in_degree(u) > 0)  // complex source
          best = std::min(best, g.in_degree(u) + g.out_degree(u));
      } else {
        best = std::min(best, g.in_degree(u));
      }
    }
    r.degree_bound = (best == SIZE_MAX) ? 0 : best;
    bool lf = true;
    for (NodeId u = 0; u < n; ++u) lf &= (g.degree(u) >= 2);
    r.line_free = lf;
  }

  std::size_t m = g.edge_count();
  std::size_t ceil_avg = n == 0 ? 0 : (2 * m + n - 1) / n;
  r.edge_bound = std::min(n, ceil_avg);
  return r;
}

// ---------------------------------------------------------------------------
// Canonical subset enumeration
//
// Node sets are ordered by their ascending element sequence, shorter prefix
// first: {} < {0} < {0,1} < {0,2} < {1}. The identifiability search scans
// unordered pairs {A,B} as (A,B) with A < B, level k holding every pair with
// max(|A|,|B|) = k, so "smaller sizes already verified" holds level to
// level and the first failing pair is a deterministic witness.
// ---------------------------------------------------------------------------

namespace detail {

inline int compare_sets(const std::vector<NodeId>& a,
                        const std::vector<NodeId>& b) {
  std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

/// Prefix-lexicographic subset stream over universe [0,n) with |S| <= k.
/// Starts at the empty set; state is the element stack plus a bitset mirror.
class SubsetEnum {
 public:
  SubsetEnum(std::size_t n, std::size_t k) : n_(n), k_(k), bits_(n) {}

  /// Positions the stream on an existing set (the stream then continues
  /// with that set's successor).
  void seek(const std::vector<NodeId>& set) {
    elems_ = set;
    bits_.clear();
    for (NodeId v : elems_) bits_.set(v);
    done_ = false;
  }

  const std::vector<NodeId>& elems() const { return elems_; }
  const Bitset& bits() const { return bits_; }
  bool done() const { return done_; }

  /// Advances to the successor set; returns false when exhausted.
  bool next() {
    if (done_) return false;
    if (elems_.size() < k_) {
      NodeId start = elems_.empty() ? 0 : elems_.back() + 1;
      if (start < n_) {
        elems_.push_back(start);
        bits_.set(start);
        return true;
      }
    }
    while (!elems_.empty()) {
      NodeId last = elems_.back();
      elems_.pop_back();
      bits_.reset(last);
      if (last + 1 < n_) {
        elems_.push_back(last + 1);
        bits_.set(last + 1);
        return true;
      }
    }
    done_ = true;
    return false;
  }

  /// Advances to the next set of size exactly k.
  bool next_of_size_k() {
    while (next()) {
      if (elems_.size() == k_) return true;
    }
    return false;
  }

 private:
  std::size_t n_, k_;
  std::vector<NodeId> elems_;
  Bitset bits_;
  bool done_ = false;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of subsets of [0,n) with size <= k.
inline std::uint64_t subsets_up_to_size(std::uint64_t n, std::uint64_t k) {
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i <= k; ++i) total += binomial(n, i);
  return total;
}

/// Unordered distinct-set pairs with both sizes <= k.
inline std::uint64_t pairs_up_to_level(std::uint64_t n, std::uint64_t k) {
  std::uint64_t s = subsets_up_to_size(n, k);
  return s * (s - 1) / 2;
}

/// Rank (1-based) of `set` in the prefix-lex stream: over all sets of size
/// <= k when exact_size is nullopt (the empty set has rank 1), or within
/// the subsequence of sets of that exact size. Counts earlier-sibling
/// subtrees along the prefix path plus, in the <=k stream, the ancestors.
inline std::uint64_t subset_rank(const std::vector<NodeId>& set,
                                 std::uint64_t n, std::uint64_t k,
                                 std::optional<std::uint64_t> exact_size) {
  auto subtree = [&](std::uint64_t depth, std::uint64_t last) {
    // sets extending a prefix of size `depth` whose last element is `last`,
    // the prefix itself included
    std::uint64_t free = n - 1 - last;
    if (exact_size) {
      if (*exact_size < depth) return std::uint64_t{0};
      return binomial(free, *exact_size - depth);
    }
    std::uint64_t total = 0;
    for (std::uint64_t t = 0; depth + t <= k; ++t) total += binomial(free, t);
    return total;
  };
  std::uint64_t before = 0;
  if (!exact_size) before += set.size();  // the empty set + proper prefixes
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::uint64_t lo = (i == 0) ? 0 : std::uint64_t(set[i - 1]) + 1;
    for (std::uint64_t v = lo; v < set[i]; ++v) before += subtree(i + 1, v);
  }
  return before + 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Maximal identifiability
// ---------------------------------------------------------------------------

struct MuOptions {
  RoutingScheme scheme = RoutingScheme::Csp;
  /// Stop after verifying this many levels and report a lower bound.
  std::optional<std::size_t> k_cap;
  /// Truncation: only pairs with both sides of size <= alpha are examined.
  std::optional<std::size_t> alpha;
  std::size_t path_budget = default_path_budget();
  unsigned workers = 1;
  /// Nodes that may not start a measurement path (CSP only).
  std::vector<NodeId> exclude_starts;
};

struct IdentReport {
  std::size_t mu = 0;
  /// Unseparated pair certifying the upper bound: P(U) = P(W) and
  /// max(|U|,|W|) = mu + 1. Absent when the search stopped at a cap.
  std::optional<std::pair<std::vector<NodeId>, std::vector<NodeId>>>
      witness_pair;
  RoutingScheme scheme = RoutingScheme::Csp;
  std::uint64_t pairs_examined = 0;
  std::optional<std::size_t> truncation;
  /// Set when a cap (k_cap, or truncation with no failing pair in range)
  /// ended the search before a witness was found; mu is then only a lower
  /// bound on the true value.
  bool lower_bound_only = false;
};

namespace detail {

struct FailingPair {
  std::vector<NodeId> a, b;
};

inline bool pair_less(const FailingPair& x, const FailingPair& y) {
  int c = compare_sets(x.a, y.a);
  if (c != 0) return c < 0;
  return compare_sets(x.b, y.b) < 0;
}

/// Separation oracle over an explicit path index: a pair fails when the
/// unions of per-node incidences coincide. The A side is cached; the B side
/// is OR-ed lazily word by word so the common case exits on the first
/// mismatching word.
class CspOracle {
 public:
  explicit CspOracle(const PathIndex& idx) : idx_(idx) {}

  void prepare_a(const std::vector<NodeId>& a) {
    pa_.assign(idx_.incidence.empty() ? 0 : idx_.incidence[0].word_count(),
               0);
    for (NodeId v : a)
      for (std::size_t w = 0; w < pa_.size(); ++w)
        pa_[w] |= idx_.incidence[v].word(w);
  }

  bool pair_fails(const std::vector<NodeId>& b) const {
    for (std::size_t w = 0; w < pa_.size(); ++w) {
      std::uint64_t bw = 0;
      for (NodeId v : b) bw |= idx_.incidence[v].word(w);
      if (bw != pa_[w]) return false;
    }
    return true;
  }

 private:
  const PathIndex& idx_;
  std::vector<std::uint64_t> pa_;
};

/// Separation oracle for walk schemes, backed by cached live sets: the pair
/// (A,B) is separated iff some node of A\B stays live once B is removed, or
/// vice versa. One BFS pair per distinct removed set, memoized.
class WalkOracle {
 public:
  WalkOracle(const Graph& g, const MonitorPlacement& chi, bool allow_dlp)
      : g_(g),
        in_set_(chi.input_set(g.node_count())),
        out_set_(chi.output_set(g.node_count())),
        allow_dlp_(allow_dlp) {}

  void prepare_a(const std::vector<NodeId>& a) {
    a_bits_ = Bitset(g_.node_count());
    for (NodeId v : a) a_bits_.set(v);
    live_a_ = &live(a_bits_);
  }

  bool pair_fails_bits(const Bitset& b_bits) {
    // touch = A \ B against live(B)
    const Bitset& live_b = live(b_bits);
    if (a_bits_.intersects_excluding(b_bits, live_b)) return false;
    // touch = B \ A against live(A)
    if (b_bits.intersects_excluding(a_bits_, *live_a_)) return false;
    return true;
  }

 private:
  const Bitset& live(const Bitset& avoid) {
    auto it = cache_.find(avoid);
    if (it != cache_.end()) return it->second;
    auto [pos, _] = cache_.emplace(
        avoid, detail::live_set(g_, in_set_, out_set_, avoid, allow_dlp_));
    return pos->second;
  }

  const Graph& g_;
  Bitset in_set_, out_set_;
  bool allow_dlp_;
  Bitset a_bits_;
  const Bitset* live_a_ = nullptr;
  std::unordered_map<Bitset, Bitset, BitsetHash> cache_;
};

/// Scans one level of the pair space and returns the canonically smallest
/// failing pair, if any. Workers take A-sets round-robin; each reports the
/// first failure in its own slice and the reduction takes the global
/// minimum, so the result is identical for any worker count.
template <typename MakeOracle>
std::optional<FailingPair> scan_level(std::size_t n, std::size_t k,
                                      unsigned workers,
                                      MakeOracle&& make_oracle) {
  std::mutex best_mutex;
  std::optional<FailingPair> best;

  auto worker_fn = [&](unsigned wid) {
    auto oracle = make_oracle();
    std::optional<FailingPair> local;
    SubsetEnum a_enum(n, k);
    std::uint64_t a_index = 0;
    // A iterates over every set of size <= k, the empty set included.
    do {
      if (a_index++ % workers != wid) continue;
      {
        std::lock_guard<std::mutex> lk(best_mutex);
        if (best && compare_sets(a_enum.elems(), best->a) >= 0) break;
      }
      const auto& a = a_enum.elems();
      oracle.prepare_a(a);
      SubsetEnum b_enum(n, k);
      b_enum.seek(a);
      bool a_is_full = a.size() == k;
      bool found = false;
      while (a_is_full ? b_enum.next() : b_enum.next_of_size_k()) {
        bool fails;
        if constexpr (requires { oracle.pair_fails_bits(b_enum.bits()); }) {
          fails = oracle.pair_fails_bits(b_enum.bits());
        } else {
          fails = oracle.pair_fails(b_enum.elems());
        }
        if (fails) {
          local = FailingPair{a, b_enum.elems()};
          found = true;
          break;
        }
      }
      if (found) break;  // later A-sets only yield larger pairs
    } while (a_enum.next());

    if (local) {
      std::lock_guard<std::mutex> lk(best_mutex);
      if (!best || pair_less(*local, *best)) best = *local;
    }
  };

  if (workers <= 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w)
      threads.emplace_back(worker_fn, w);
    for (auto& t : threads) t.join();
  }
  return best;
}

/// Sequential-equivalent pair count: full levels below the witness level
/// plus the witness's 1-based rank inside its level. Independent of the
/// worker count by construction.
inline std::uint64_t pairs_examined_until(std::size_t n, std::size_t level,
                                          const FailingPair& witness) {
  std::uint64_t total =
      level >= 2 ? pairs_up_to_level(n, level - 1) : 0;

  std::uint64_t a_seen_le = 0;       // sets <= current A (all sizes <= k)
  std::uint64_t a_seen_exact = 0;    // sets <= current A of size == k
  std::uint64_t n_le = subsets_up_to_size(n, level);
  std::uint64_t n_exact = binomial(n, level);

  SubsetEnum a_enum(n, level);
  do {
    const auto& a = a_enum.elems();
    ++a_seen_le;
    if (a.size() == level) ++a_seen_exact;
    int cmp = compare_sets(a, witness.a);
    if (cmp < 0) {
      // full B range for this A
      total += (a.size() == level) ? (n_le - a_seen_le)
                                   : (n_exact - a_seen_exact);
    } else {
      // partial range: B in (A, witness.b]
      std::uint64_t b_rank =
          a.size() == level
              ? subset_rank(witness.b, n, level, std::nullopt)
              : subset_rank(witness.b, n, level, level);
      std::uint64_t a_rank = a.size() == level ? a_seen_le : a_seen_exact;
      total += b_rank - a_rank;
      break;
    }
  } while (a_enum.next());
  return total;
}

}  // namespace detail

/// Exact maximal identifiability. The search ascends k = 1, 2, ...; at each
/// level every not-yet-verified pair is tested and the first failing pair
/// (canonical order) becomes the witness, giving mu = k - 1. Monotonicity
/// of the separation condition justifies the early stop. With no failure
/// the scan ends at min(k_cap, degree_bound + 1); a failing pair always
/// exists at level degree_bound + 1 under CSP and CAP⁻.
inline IdentReport compute_mu(const Graph& g, const MonitorPlacement& chi,
                              const MuOptions& opts = {}) {
  if (!is_connected(g)) throw DomainError("compute_mu: graph disconnected");
  chi.validate_against(g);
  const std::size_t n = g.node_count();
  const unsigned workers = std::max(1u, opts.workers);

  BoundsReport bounds = bounds_report(g, chi);
  std::size_t hard_cap = opts.scheme == RoutingScheme::Cap
                             ? n
                             : bounds.degree_bound + 1;
  std::size_t stop = hard_cap;
  if (opts.k_cap) stop = std::min(stop, *opts.k_cap);
  std::size_t scan_top = stop;
  if (opts.alpha) {
    if (*opts.alpha < 1) throw DomainError("alpha must be >= 1");
    scan_top = std::min(scan_top, *opts.alpha);
  }

  std::optional<PathIndex> idx;
  if (opts.scheme == RoutingScheme::Csp)
    idx = enumerate_csp_paths(g, chi, opts.path_budget, opts.exclude_starts);

  IdentReport report;
  report.scheme = opts.scheme;
  report.truncation = opts.alpha;

  for (std::size_t k = 1; k <= scan_top; ++k) {
    std::optional<detail::FailingPair> fail;
    if (opts.scheme == RoutingScheme::Csp) {
      fail = detail::scan_level(n, k, workers,
                                [&] { return detail::CspOracle(*idx); });
    } else {
      bool dlp = opts.scheme == RoutingScheme::Cap;
      fail = detail::scan_level(n, k, workers, [&] {
        return detail::WalkOracle(g, chi, dlp);
      });
    }
    if (fail) {
      report.mu = k - 1;
      report.witness_pair = {fail->a, fail->b};
      report.pairs_examined = detail::pairs_examined_until(n, k, *fail);
      if (opts.scheme != RoutingScheme::Cap &&
          report.mu > bounds.degree_bound)
        throw std::logic_error("mu exceeds degree bound: internal error");
      return report;
    }
  }

  report.pairs_examined = detail::pairs_up_to_level(n, scan_top);
  report.mu = stop;
  // Exact when every conceivable level was cleared (CAP with stop = n);
  // otherwise the caps cut the scan short and mu is a lower bound.
  bool exhaustive_cap = opts.scheme == RoutingScheme::Cap && stop == n &&
                        scan_top == stop;
  report.lower_bound_only = !exhaustive_cap;
  return report;
}

/// Truncated search: only pairs with both sides of size <= alpha are
/// examined, which can only miss failures, so mu_alpha >= mu, with equality
/// whenever alpha >= degree_bound + 1.
inline IdentReport compute_mu_truncated(const Graph& g,
                                        const MonitorPlacement& chi,
                                        RoutingScheme scheme,
                                        std::size_t alpha,
                                        const MuOptions& base = {}) {
  MuOptions opts = base;
  opts.scheme = scheme;
  opts.alpha = alpha;
  return compute_mu(g, chi, opts);
}

/// Replays a witness pair against the measurement model: true when the pair
/// is genuinely unseparated under the given scheme.
inline bool verify_witness(const Graph& g, const MonitorPlacement& chi,
                           RoutingScheme scheme,
                           const std::vector<NodeId>& u,
                           const std::vector<NodeId>& w,
                           std::size_t path_budget = default_path_budget()) {
  if (scheme == RoutingScheme::Csp) {
    PathIndex idx = enumerate_csp_paths(g, chi, path_budget);
    return !csp_separates(idx, u, w).separated;
  }
  bool dlp = scheme == RoutingScheme::Cap;
  auto minus = [](const std::vector<NodeId>& x, const std::vector<NodeId>& y) {
    std::vector<NodeId> out;
    for (NodeId v : x)
      if (std::find(y.begin(), y.end(), v) == y.end()) out.push_back(v);
    return out;
  };
  if (cap_minus_separating_path_exists(g, chi, minus(u, w), w, dlp).exists)
    return false;
  if (cap_minus_separating_path_exists(g, chi, minus(w, u), u, dlp).exists)
    return false;
  return true;
}

// ---------------------------------------------------------------------------
// Truncation error model
// ---------------------------------------------------------------------------

/// Worst-case fraction of the pair search space that a truncated search can
/// miss, with zeta(i,j) = C(n,i)*(C(n,j)-1) pairs per cell of the size
/// matrix. The column at j = delta is counted in both denominator sums,
/// exactly as the model states it.
inline Rational error_fraction_bound(std::size_t n, std::size_t delta,
                                     std::size_t lambda) {
  if (!(1 <= delta && delta <= lambda && lambda <= n))
    throw DomainError("error_fraction_bound requires 1 <= delta <= lambda <= n");
  using Int = boost::multiprecision::cpp_int;
  auto binom = [&](std::size_t nn, std::size_t kk) {
    Int r = 1;
    if (kk > nn) return Int(0);
    for (std::size_t i = 1; i <= kk; ++i) {
      r *= Int(nn - kk + i);
      r /= Int(i);
    }
    return r;
  };
  auto zeta = [&](std::size_t i, std::size_t j) {
    return binom(n, i) * (binom(n, j) - 1);
  };
  Int numerator = 0;
  for (std::size_t i = 1; i <= delta; ++i)
    for (std::size_t j = lambda + 1; j <= n; ++j) numerator += zeta(i, j);
  Int denominator = 0;
  for (std::size_t i = 1; i <= delta; ++i)
    for (std::size_t j = i; j <= delta; ++j) denominator += zeta(i, j);
  for (std::size_t i = 1; i <= delta; ++i)
    for (std::size_t j = delta; j <= n; ++j) denominator += zeta(i, j);
  if (denominator == 0)
    throw DomainError("error_fraction_bound: empty search space");
  return Rational(numerator, denominator);
}

// ---------------------------------------------------------------------------
// Measurement model
// ---------------------------------------------------------------------------

/// One measurement bit per path: 1 iff the path contains a failed node.
inline Bitset simulate_measurement(const PathIndex& idx,
                                   const std::vector<NodeId>& failures) {
  Bitset b(idx.path_count());
  for (NodeId v : failures) {
    if (v >= idx.node_count)
      throw DomainError("simulate_measurement: bad node id");
    b |= idx.incidence[v];
  }
  return b;
}

struct ConsistentSets {
  /// Failure sets over path-covered nodes whose simulated measurement
  /// equals the target, in canonical subset order.
  std::vector<std::vector<NodeId>> solutions;
  /// Nodes on no path: unconstrained by the measurement system, reported
  /// separately instead of multiplying the solution list.
  std::vector<NodeId> unconstrained_nodes;
};

inline ConsistentSets consistent_failure_sets(const PathIndex& idx,
                                              const Bitset& b,
                                              std::size_t size_cap) {
  if (b.size() != idx.path_count())
    throw DomainError("consistent_failure_sets: measurement size mismatch");
  ConsistentSets out;
  std::vector<NodeId> covered;
  for (NodeId u = 0; u < idx.node_count; ++u) {
    if (idx.incidence[u].any())
      covered.push_back(u);
    else
      out.unconstrained_nodes.push_back(u);
  }
  detail::SubsetEnum en(covered.size(), std::min(size_cap, covered.size()));
  do {
    Bitset sim(idx.path_count());
    std::vector<NodeId> actual;
    for (NodeId ci : en.elems()) {
      actual.push_back(covered[ci]);
      sim |= idx.incidence[covered[ci]];
    }
    if (sim == b) out.solutions.push_back(actual);
  } while (en.next());
  return out;
}

}  // namespace bnt
