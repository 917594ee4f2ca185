// Acceptance suite: one test case per shipping criterion, each printing a
// single "criterion N <name>: PASS|FAIL" line for the harness to match.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "tokcol/algo_rand.hpp"
#include "tokcol/engine.hpp"
#include "tokcol/trace_io.hpp"
#include "tokcol/verify.hpp"

using namespace tokcol;

namespace {

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_count(int jobs) {
  const char* env = std::getenv("TOKCOL_WORKERS");
  int w = env ? std::atoi(env) : static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  return w < jobs ? w : jobs;
}

template <class F>
void parallel_for(int count, F fn) {
  int workers = worker_count(count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

void verdict_line(int idx, const char* name, bool ok) {
  std::printf("criterion %d %s: %s\n", idx, name, ok ? "PASS" : "FAIL");
  std::fflush(stdout);
}

// --- shared corpus ----------------------------------------------------------
// 512 seeded runs over rings, paths, random connected graphs, and dumbbells
// (n <= 32, k <= 64, duplicate pairs in {0, 1, 3}), covering the one-shot
// algorithm with and without packing, the streamed algorithm at token
// lengths {4, 16, 64, 256} against a 16-bit budget, and both knowledge modes.

struct CorpusCase {
  int topo_id = 0;
  TokenAssignment tokens;
  RunConfig cfg;
};

const std::vector<Topology>& corpus_topologies() {
  static const std::vector<Topology> topos = [] {
    std::vector<Topology> ts;
    std::uint64_t s = 777;
    for (int n : {4, 9, 16, 32}) ts.push_back(make_ring(n, ++s));
    for (int n : {3, 8, 17, 32}) ts.push_back(make_path(n, ++s));
    for (int n : {5, 12, 24, 32}) ts.push_back(make_random_connected(n, 0.3, ++s));
    for (auto [clique, bridge] : {std::pair{3, 1}, {6, 3}, {10, 1}, {13, 3}})
      ts.push_back(make_dumbbell(clique, bridge, ++s));
    return ts;
  }();
  return topos;
}

int corpus_k(int n, int dup, int L) {
  int k = n;
  if (L == 4) k = k < 12 ? k : 12;  // 4-bit values: keep distinct draws feasible
  if (dup > 0 && k < 2 * dup + 2) k = 2 * dup + 2;
  return k;
}

std::vector<CorpusCase> corpus(TraceLevel lvl) {
  const auto& topos = corpus_topologies();
  std::vector<CorpusCase> out;
  auto add = [&](int topo_id, int k, int L, int dup, Algorithm algo, Knowledge know,
                 int B, bool packing) {
    CorpusCase c;
    c.topo_id = topo_id;
    std::uint64_t seed = 1000003ULL * (out.size() + 1) + 7;
    c.tokens = assign_tokens(topos[topo_id], k, L,
                             dup ? AssignMode::WithDuplicates : AssignMode::Distinct,
                             dup, seed);
    c.cfg.algorithm = algo;
    c.cfg.knowledge = know;
    c.cfg.bandwidth_B = B;
    c.cfg.trace_level = lvl;
    c.cfg.seed = seed;
    c.cfg.packing = packing;
    out.push_back(std::move(c));
  };

  for (int t = 0; t < static_cast<int>(topos.size()); ++t) {
    int n = topos[t].n;
    // streamed algorithm across token lengths against a fixed 16-bit budget
    for (int L : {4, 16, 64, 256})
      for (int dup : {0, 1, 3})
        add(t, corpus_k(n, dup, L), L, dup, Algorithm::DetLarge, Knowledge::N, 16, false);
    // one-shot algorithm, auto budget, with and without packing
    for (int L : {4, 16})
      for (int dup : {0, 1, 3})
        for (int packing : {0, 1})
          add(t, corpus_k(n, dup, L), L, dup, Algorithm::DetSmall, Knowledge::N,
              packing ? 2 * auto_bandwidth(Algorithm::DetSmall, n, L) : 0,
              packing != 0);
    // token count extremes
    for (int k : {1, 64}) {
      add(t, k, 16, 0, Algorithm::DetSmall, Knowledge::N, 0, false);
      add(t, k, 16, 0, Algorithm::DetLarge, Knowledge::N, 16, false);
    }
    // count-known runs
    for (int L : {4, 16})
      for (int dup : {0, 1})
        add(t, corpus_k(n, dup, L), L, dup, Algorithm::DetSmall, Knowledge::K, 0, false);
  }
  return out;
}

long long iterations_until_quiet(const RunTrace& t) {
  for (std::size_t s = 0; s < t.rounds.size(); ++s) {
    bool building = false;
    for (const auto& ns : t.rounds[s]) building = building || ns.build;
    if (!building) return static_cast<long long>(s);
  }
  return -1;
}

}  // namespace

TEST_CASE("criterion 1 oracle equivalence") {
  auto t0 = std::chrono::steady_clock::now();
  auto cases = corpus(TraceLevel::Metrics);
  const auto& topos = corpus_topologies();

  std::atomic<int> mismatches{0};
  std::mutex mu;
  std::vector<std::string> notes;
  parallel_for(static_cast<int>(cases.size()), [&](int i) {
    const CorpusCase& c = cases[i];
    RunResult r = run_instance(topos[c.topo_id], c.tokens, c.cfg);
    Verdict want = oracle_collision(c.tokens);
    bool ok = r.metrics.outcome == Outcome::Decided && r.metrics.verdict &&
              *r.metrics.verdict == want;
    for (const auto& nv : r.metrics.verdict_per_node)
      ok = ok && nv.has_value() && *nv == *r.metrics.verdict;
    if (!ok) {
      mismatches.fetch_add(1);
      std::lock_guard<std::mutex> g(mu);
      if (notes.size() < 5)
        notes.push_back("  run " + std::to_string(i) + ": outcome " +
                        to_string(r.metrics.outcome) + ", want " + to_string(want));
    }
  });

  double elapsed = secs_since(t0);
  bool ok = cases.size() >= 500 && mismatches.load() == 0 && elapsed < 120.0;
  std::printf("  corpus runs: %zu, verdict mismatches: %d, %.1f s (budget 120 s)\n",
              cases.size(), mismatches.load(), elapsed);
  for (const auto& s : notes) std::printf("%s\n", s.c_str());
  verdict_line(1, "oracle equivalence", ok);
  CHECK(ok);
}

TEST_CASE("criterion 2 invariant suite") {
  auto t0 = std::chrono::steady_clock::now();
  auto cases = corpus(TraceLevel::Full);
  const auto& topos = corpus_topologies();

  // pass 1: every honest trace satisfies every checker
  std::atomic<int> dirty{0};
  std::mutex mu;
  std::vector<std::string> notes;
  parallel_for(static_cast<int>(cases.size()), [&](int i) {
    const CorpusCase& c = cases[i];
    RunResult r = run_instance(topos[c.topo_id], c.tokens, c.cfg);
    InvariantReport rep = check_trace(topos[c.topo_id], r.trace);
    if (!rep.ok()) {
      dirty.fetch_add(1);
      std::lock_guard<std::mutex> g(mu);
      if (notes.size() < 5)
        notes.push_back("  run " + std::to_string(i) + ": " +
                        rep.violations.front().checker + " @ row " +
                        std::to_string(rep.violations.front().round));
    }
  });

  // pass 2: negative controls; each canned fault must be caught by its own
  // checker on the first corpus trace that can host it
  auto muts = canned_mutations();
  std::map<std::pair<std::string, int>, int> verdicts;  // 1 caught, -1 missed
  std::size_t resolved = 0;
  for (const CorpusCase& c : cases) {
    if (resolved == muts.size()) break;
    RunResult r = run_instance(topos[c.topo_id], c.tokens, c.cfg);
    for (const auto& m : muts) {
      auto key = std::make_pair(m.checker, m.variant);
      if (verdicts.count(key)) continue;
      auto broken = apply_mutation(topos[c.topo_id], r.trace, m);
      if (!broken) continue;
      InvariantReport rep = check_trace(topos[c.topo_id], *broken);
      verdicts[key] = rep.flagged(m.checker) ? 1 : -1;
      ++resolved;
      if (verdicts[key] < 0)
        notes.push_back("  fault not flagged: " + m.checker + " variant " +
                        std::to_string(m.variant));
    }
  }
  int caught = 0, missed = 0, unhosted = 0;
  for (const auto& m : muts) {
    auto it = verdicts.find({m.checker, m.variant});
    if (it == verdicts.end()) {
      ++unhosted;
      notes.push_back("  fault never hosted: " + m.checker + " variant " +
                      std::to_string(m.variant));
    } else if (it->second > 0) {
      ++caught;
    } else {
      ++missed;
    }
  }

  bool ok = dirty.load() == 0 && caught == static_cast<int>(muts.size()) &&
            missed == 0 && unhosted == 0;
  std::printf("  clean traces: %zu of %zu, faults caught: %d of %zu, %.1f s\n",
              cases.size() - dirty.load(), cases.size(), caught, muts.size(),
              secs_since(t0));
  for (const auto& s : notes) std::printf("%s\n", s.c_str());
  verdict_line(2, "invariant suite", ok);
  CHECK(ok);
}

TEST_CASE("criterion 3 linear round scaling") {
  auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> sizes = {8, 16, 32, 64};
  std::vector<double> fitted;
  bool all_bounded = true, all_decided = true;
  std::printf("  one-shot algorithm, k = n, rounds against D + k:\n");
  for (int n : sizes) {
    int L = bits_for_count(n - 1) + 2;
    std::vector<double> ratios;
    for (int rep = 0; rep < 3; ++rep) {
      std::uint64_t seed = 9000ULL + 97ULL * rep + n;
      for (int family = 0; family < 2; ++family) {
        Topology topo = family == 0 ? make_ring(n, seed) : make_random_connected(n, 0.1, seed);
        TokenAssignment tk = assign_tokens(topo, n, L, AssignMode::Distinct, 0, seed + 1);
        RunConfig c;
        c.algorithm = Algorithm::DetSmall;
        c.knowledge = Knowledge::N;
        c.seed = seed;
        RunResult r = run_instance(topo, tk, c);
        long long work = diameter(topo) + n;
        all_decided = all_decided && r.metrics.outcome == Outcome::Decided;
        all_bounded = all_bounded && r.metrics.rounds <= 64 * work;
        ratios.push_back(static_cast<double>(r.metrics.rounds) / static_cast<double>(work));
      }
    }
    double mean = 0;
    for (double v : ratios) mean += v;
    mean /= static_cast<double>(ratios.size());
    fitted.push_back(mean);
    std::printf("    n=%-3d fitted C = %.2f\n", n, mean);
  }
  bool stable = true;
  for (std::size_t i = 1; i < fitted.size(); ++i) {
    double ratio = fitted[i] / fitted[i - 1];
    stable = stable && ratio <= 2.0 && ratio >= 0.5;
  }
  bool ok = stable && all_bounded && all_decided;
  std::printf("  consecutive-doubling drift within 2x: %s, hard bound 64(D+k): %s, %.1f s\n",
              stable ? "yes" : "no", all_bounded && all_decided ? "held" : "broken",
              secs_since(t0));
  verdict_line(3, "linear round scaling", ok);
  CHECK(ok);
}

TEST_CASE("criterion 4 pipelined length scaling") {
  auto t0 = std::chrono::steady_clock::now();
  const int n = 16, B = 16;
  Topology topo = make_ring(n, 31);
  int D = diameter(topo);
  struct Point {
    int L;
    long long quiet = 0;
    double shape = 0;
    long long rounds = 0;
    long long rounds_cap = 0;
  };
  std::vector<Point> pts;
  bool measured_all = true, hard_bound = true;
  for (int L : {16, 64, 256, 1024}) {
    // worst-case inputs: shared zero prefix, token index in the last pieces,
    // so the election cannot settle before the final differing piece lands
    TokenAssignment tk;
    tk.L = L;
    tk.at.assign(n, {});
    for (int v = 0; v < n; ++v) {
      BitString t(L);
      t.write(L - 16, BitString::from_u64(static_cast<std::uint64_t>(v) + 1, 16));
      tk.at[v].push_back(t);
    }
    RunConfig c;
    c.algorithm = Algorithm::DetLarge;
    c.knowledge = Knowledge::N;
    c.bandwidth_B = B;
    c.trace_level = TraceLevel::Full;
    c.seed = 5;
    RunResult r = run_instance(topo, tk, c);
    Point p;
    p.L = L;
    p.quiet = r.metrics.outcome == Outcome::Decided ? iterations_until_quiet(r.trace) : -1;
    double lg = L > B ? std::log2(static_cast<double>(L) / B) : 0.0;
    double denom = lg > 1.0 ? lg : 1.0;
    p.shape = D + static_cast<double>(L) / denom;
    p.rounds = r.metrics.rounds;
    p.rounds_cap = 64 * (static_cast<long long>(D * denom) +
                         static_cast<long long>(n) * ((L + B - 1) / B));
    measured_all = measured_all && p.quiet > 0;
    hard_bound = hard_bound && p.rounds <= p.rounds_cap;
    pts.push_back(p);
  }
  bool within = measured_all;
  if (measured_all) {
    double logsum = 0;
    for (const auto& p : pts) logsum += std::log(static_cast<double>(p.quiet) / p.shape);
    double C = std::exp(logsum / static_cast<double>(pts.size()));
    std::printf("  streamed election on a ring, n=%d, B=%d, fitted C = %.3f:\n", n, B, C);
    for (const auto& p : pts) {
      double rel = static_cast<double>(p.quiet) / (C * p.shape);
      within = within && rel <= 2.0 && rel >= 0.5;
      std::printf("    L=%-5d iterations-to-quiet %-5lld vs C*(D + L/log2(L/B)) = %-8.1f"
                  " (x%.2f), rounds %lld <= %lld\n",
                  p.L, p.quiet, C * p.shape, rel, p.rounds, p.rounds_cap);
    }
  }
  bool ok = measured_all && within && hard_bound;
  std::printf("  per-point fit within 2x: %s, hard round caps: %s, %.1f s\n",
              within ? "yes" : "no", hard_bound ? "held" : "broken", secs_since(t0));
  verdict_line(4, "pipelined length scaling", ok);
  CHECK(ok);
}

TEST_CASE("criterion 5 cover indistinguishability") {
  auto t0 = std::chrono::steady_clock::now();
  const long long kRounds = 200;
  bool ok = true;
  for (int n : {3, 4, 5, 6}) {
    CoverPair cp = make_double_cover_pair(n);
    RunConfig c;
    c.algorithm = Algorithm::DetSmall;
    c.knowledge = Knowledge::None;
    c.bandwidth_B = auto_bandwidth(Algorithm::DetSmall, cp.cover.n, cp.base_tokens.L);
    c.round_limit = kRounds;
    c.trace_level = TraceLevel::Full;
    c.seed = 1;
    RunResult base = run_instance(cp.base, cp.base_tokens, c);
    RunResult cover = run_instance(cp.cover, cp.cover_tokens, c);
    long long want = kRounds + 1;  // snapshot rows, the initial row included
    long long rows = equivalent_prefix_rows(cover.trace, base.trace, cp.map_to_base);
    bool pair_ok = base.metrics.outcome == Outcome::NoDecision &&
                   cover.metrics.outcome == Outcome::NoDecision &&
                   static_cast<long long>(base.trace.rounds.size()) == want &&
                   static_cast<long long>(cover.trace.rounds.size()) == want &&
                   rows == want;
    std::printf("  ring n=%d vs 2n=%d: identical state rows %lld of %lld\n", n, 2 * n,
                rows, want);
    ok = ok && pair_ok;
  }
  {
    // negative control: reversed port orientation must break the mirror
    CoverPair cp = make_double_cover_pair(4, true);
    RunConfig c;
    c.algorithm = Algorithm::DetSmall;
    c.knowledge = Knowledge::None;
    c.bandwidth_B = auto_bandwidth(Algorithm::DetSmall, cp.cover.n, cp.base_tokens.L);
    c.round_limit = kRounds;
    c.trace_level = TraceLevel::Full;
    c.seed = 1;
    RunResult base = run_instance(cp.base, cp.base_tokens, c);
    RunResult cover = run_instance(cp.cover, cp.cover_tokens, c);
    long long rows = equivalent_prefix_rows(cover.trace, base.trace, cp.map_to_base);
    std::printf("  flipped-port control diverges after %lld rows\n", rows);
    ok = ok && rows < kRounds + 1;
  }
  double elapsed = secs_since(t0);
  ok = ok && elapsed < 10.0;
  std::printf("  %.1f s (budget 10 s)\n", elapsed);
  verdict_line(5, "cover indistinguishability", ok);
  CHECK(ok);
}

TEST_CASE("criterion 6 randomized detection") {
  auto t0 = std::chrono::steady_clock::now();
  const int kSeeds = 1000;
  Topology topo = make_ring(8, 42);
  TokenAssignment distinct = assign_tokens(topo, 8, 128, AssignMode::Distinct, 0, 4242);
  TokenAssignment planted = assign_tokens(topo, 8, 128, AssignMode::WithDuplicates, 1, 4243);

  std::atomic<int> distinct_right{0}, planted_right{0}, undecided{0};
  parallel_for(kSeeds, [&](int i) {
    RunConfig c;
    c.algorithm = Algorithm::Rand;
    c.knowledge = Knowledge::K;
    c.seed = static_cast<std::uint64_t>(i) + 1;
    RunResult d = run_instance(topo, distinct, c);
    if (d.metrics.outcome != Outcome::Decided) undecided.fetch_add(1);
    else if (*d.metrics.verdict == Verdict::AllDistinct) distinct_right.fetch_add(1);
    RunResult p = run_instance(topo, planted, c);
    if (p.metrics.outcome != Outcome::Decided) undecided.fetch_add(1);
    else if (*p.metrics.verdict == Verdict::Collision) planted_right.fetch_add(1);
  });

  // hash family alone: distinct 128-bit values must stay distinct except
  // with frequency at most 1/k^2 plus sampling noise
  const int kTrials = 1000;
  std::atomic<int> hash_failures{0};
  parallel_for(kTrials, [&](int i) {
    Rng g = Rng(90000ULL + i).derive(0x74726c);
    std::set<Token> vals;
    while (vals.size() < 8) vals.insert(g.bits(128));
    HashSpec h = build_hash(g.next_u64(), 8, 128, 2);
    std::set<std::uint64_t> images;
    for (const Token& t : vals) images.insert(h.eval(t));
    if (images.size() < vals.size()) hash_failures.fetch_add(1);
  });
  double p0 = 1.0 / 64.0;
  double sigma = std::sqrt(p0 * (1 - p0) / kTrials);
  int hash_cap = static_cast<int>(std::floor((p0 + 3 * sigma) * kTrials));

  bool ok = undecided.load() == 0 && distinct_right.load() >= 875 &&
            planted_right.load() == kSeeds && hash_failures.load() <= hash_cap;
  std::printf("  distinct inputs called distinct: %d of %d (need >= 875)\n",
              distinct_right.load(), kSeeds);
  std::printf("  planted duplicate called collision: %d of %d (need all)\n",
              planted_right.load(), kSeeds);
  std::printf("  hash distinct-preservation failures: %d of %d (cap %d), %.1f s\n",
              hash_failures.load(), kTrials, hash_cap, secs_since(t0));
  verdict_line(6, "randomized detection", ok);
  CHECK(ok);
}

TEST_CASE("criterion 7 degenerate inputs") {
  auto t0 = std::chrono::steady_clock::now();
  struct Deg {
    const char* what;
    Topology topo;
    TokenAssignment tk;
    std::vector<std::pair<Algorithm, Knowledge>> runs;
  };
  auto toks = [](int n, int L, const std::vector<std::pair<int, std::uint64_t>>& at) {
    TokenAssignment a;
    a.L = L;
    a.at.assign(n, {});
    for (const auto& [v, val] : at) a.at[v].push_back(BitString::from_u64(val, L));
    return a;
  };
  using AK = std::pair<Algorithm, Knowledge>;
  const std::vector<AK> det_both = {{Algorithm::DetSmall, Knowledge::N},
                                    {Algorithm::DetSmall, Knowledge::K},
                                    {Algorithm::DetLarge, Knowledge::N},
                                    {Algorithm::DetLarge, Knowledge::K}};
  auto with_rand = [&](std::vector<AK> v, bool know_n_too) {
    v.push_back({Algorithm::Rand, Knowledge::K});
    if (know_n_too) v.push_back({Algorithm::Rand, Knowledge::N});
    return v;
  };

  std::vector<Deg> degs;
  Topology one = make_path(1, 3);
  degs.push_back({"single node, one token", one, toks(1, 8, {{0, 7}}),
                  with_rand(det_both, true)});
  degs.push_back({"single node, duplicate among three", one,
                  toks(1, 8, {{0, 7}, {0, 9}, {0, 7}}), with_rand(det_both, true)});
  degs.push_back({"single node, three distinct", one,
                  toks(1, 8, {{0, 1}, {0, 2}, {0, 3}}), with_rand(det_both, false)});
  degs.push_back({"token-less nodes", make_ring(6, 4),
                  toks(6, 8, {{1, 3}, {4, 250}}), with_rand(det_both, true)});
  degs.push_back({"all tokens at one node", make_path(5, 5),
                  toks(5, 8, {{4, 1}, {4, 2}, {4, 3}, {4, 4}, {4, 5}, {4, 6}}),
                  with_rand(det_both, false)});
  degs.push_back({"all at one node with duplicate", make_path(5, 6),
                  toks(5, 8, {{0, 1}, {0, 2}, {0, 2}, {0, 3}}),
                  with_rand(det_both, true)});
  degs.push_back({"lone all-ones token", make_ring(3, 7), toks(3, 6, {{1, 63}}),
                  with_rand(det_both, true)});
  degs.push_back({"all-ones token duplicated", make_ring(3, 8),
                  toks(3, 6, {{0, 63}, {1, 62}, {2, 63}}), with_rand(det_both, true)});
  degs.push_back({"more tokens than values", make_ring(5, 9),
                  toks(5, 2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 0}}),
                  with_rand(det_both, true)});

  int failures = 0;
  for (const auto& d : degs) {
    Verdict want = oracle_collision(d.tk);
    bool all_ok = true;
    for (auto [algo, know] : d.runs) {
      RunConfig c;
      c.algorithm = algo;
      c.knowledge = know;
      c.seed = 11;
      RunResult r = run_instance(d.topo, d.tk, c);
      bool run_ok = r.metrics.outcome == Outcome::Decided && r.metrics.verdict &&
                    *r.metrics.verdict == want;
      if (!run_ok) {
        all_ok = false;
        std::printf("  wrong outcome: %s under %s/%s\n", d.what, to_string(algo),
                    to_string(know));
      }
    }
    if (!all_ok) ++failures;
    std::printf("  %-33s -> %s across %zu runs: %s\n", d.what, to_string(want),
                d.runs.size(), all_ok ? "ok" : "wrong");
  }
  bool ok = failures == 0;
  std::printf("  %.1f s\n", secs_since(t0));
  verdict_line(7, "degenerate inputs", ok);
  CHECK(ok);
}
