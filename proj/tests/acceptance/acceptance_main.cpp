// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance run. Prints one PASS/FAIL/REPORT line per criterion
// and exits non-zero if any hard criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "gtadoc/count_table.hpp"
#include "gtadoc/dag.hpp"
#include "gtadoc/executor.hpp"
#include "gtadoc/naive.hpp"
#include "gtadoc/sequence.hpp"
#include "gtadoc/sequitur.hpp"
#include "gtadoc/serialize.hpp"
#include "gtadoc/tasks.hpp"
#include "gtadoc/traversal.hpp"
#include "testkit.hpp"

namespace {

using namespace gtadoc;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failures for one criterion; keeps the first few messages.
class Check {
 public:
  explicit Check(std::string name) : name_(std::move(name)) {}

  template <class... Args>
  void fail(Args&&... parts) {
    if (failures_++ < 3) {
      std::ostringstream s;
      (s << ... << parts);
      notes_.push_back(s.str());
    }
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  void note(std::string detail) { detail_ = std::move(detail); }
  bool ok() const { return failures_ == 0; }

  void print(bool report_only = false) const {
    const char* verdict = report_only ? "REPORT" : ok() ? "PASS" : "FAIL";
    std::cout << verdict << "  " << name_;
    if (!detail_.empty()) std::cout << "  (" << detail_ << ")";
    std::cout << '\n';
    for (const auto& n : notes_) std::cout << "      " << n << '\n';
    if (failures_ > notes_.size()) {
      std::cout << "      ... " << failures_ - notes_.size() << " more\n";
    }
    std::cout.flush();
  }

 private:
  std::string name_;
  std::string detail_;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

TraversalConfig config(unsigned workers, Strategy s = Strategy::kAuto) {
  TraversalConfig cfg;
  cfg.workers = workers;
  cfg.strategy = s;
  return cfg;
}

std::string run_tsv(const Dag& dag, const Grammar& g, TaskKind kind, const TraversalConfig& cfg,
                    RoundExecutor& exec) {
  TaskOptions o;
  o.kind = kind;
  o.traversal = cfg;
  return to_tsv(run_task(dag, o, exec), g.dictionary);
}

constexpr std::uint64_t kCorpora = 200;

struct FuzzChecks {
  Check oracle{"1 oracle equivalence: 200 fuzzed corpora x 6 tasks"};
  Check laws{"2 losslessness, digram uniqueness, rule utility, format round trip"};
  Check weights{"3 weight conservation"};
  Check rounds{"4 round bounds vs DAG depth"};
  Check determinism{"5 digests stable over workers {1,2,4,8} x both strategies"};
  Check window_bound{"7 head-only window counts within bound, head/tail <= l-1"};
};

void check_laws(const std::vector<CorpusFile>& files, const Grammar& g, std::uint64_t seed,
                Check& c) {
  const auto stream = build_corpus_stream(files);
  if (expand_rule(g, 0) != stream.symbols) c.fail("seed ", seed, ": root expansion differs");
  if (auto v = testkit::digram_violation(g)) c.fail("seed ", seed, ": ", *v);
  if (auto v = testkit::utility_violation(g)) c.fail("seed ", seed, ": ", *v);
  const auto bytes = serialize_grammar(g);
  const Grammar back = deserialize_grammar(bytes);
  if (!(back == g)) c.fail("seed ", seed, ": deserialized grammar differs");
  if (serialize_grammar(back) != bytes) c.fail("seed ", seed, ": bytes differ after round trip");
}

void check_weights_and_rounds(const Dag& dag, std::uint64_t tokens, std::uint64_t seed,
                              RoundExecutor& exec, Check& weights, Check& rounds) {
  TraversalState st(dag.num_rules());
  init_top_down_masks(dag, st);
  const auto td = top_down_traverse(dag, st, {}, config(exec.workers()), exec);
  std::uint64_t total = dag.root().word_size;
  for (std::uint32_t r = 1; r < dag.num_rules(); ++r) {
    total += st.weight_of(r) * dag.rules[r].word_size;
  }
  if (total != tokens) weights.fail("seed ", seed, ": ", total, " != ", tokens);
  if (td.rounds > dag.depth) rounds.fail("seed ", seed, ": top-down ", td.rounds, " > ", dag.depth);

  TraversalStats bounds;
  gen_loc_tbl_bounds(dag, st, {}, config(exec.workers()), exec, &bounds);
  init_bottom_up_masks(dag, st);
  const auto bu = bottom_up_traverse(dag, st, {}, config(exec.workers()), exec);
  if (bounds.rounds > dag.depth || bu.rounds > dag.depth) {
    rounds.fail("seed ", seed, ": bottom-up ", bounds.rounds, "/", bu.rounds, " > ", dag.depth);
  }
}

void check_window_bound(const Dag& dag, std::uint64_t seed, RoundExecutor& exec, Check& c) {
  for (std::uint32_t l : {2u, 3u, 4u}) {
    const HeadTailTable ht = init_head_tail(dag, l, config(exec.workers()), exec);
    for (std::uint32_t r = 1; r < dag.num_rules(); ++r) {
      const Rule& rule = dag.rules[r];
      const auto got = head_only_window_count(dag, ht, r);
      const auto bound = head_tail_bound(rule.word_size, l, rule.sub_rule_size);
      if (got > bound) c.fail("seed ", seed, " l=", l, " R", r, ": ", got, " > ", bound);
      if (ht.rules[r].head.size() > l - 1 || ht.rules[r].tail.size() > l - 1) {
        c.fail("seed ", seed, " l=", l, " R", r, ": head/tail too long");
      }
    }
  }
}

FuzzChecks run_fuzz() {
  FuzzChecks c;
  std::array<std::unique_ptr<RoundExecutor>, 4> pools;
  const std::array<unsigned, 4> worker_counts{1, 2, 4, 8};
  for (std::size_t i = 0; i < pools.size(); ++i) {
    pools[i] = std::make_unique<RoundExecutor>(worker_counts[i]);
  }
  RoundExecutor& main_pool = *pools[2];

  double oracle_s = 0;
  std::uint64_t tokens_total = 0;
  for (std::uint64_t seed = 1; seed <= kCorpora; ++seed) {
    const auto files = testkit::fuzz_corpus(seed);
    const std::uint64_t tokens = testkit::token_count(files);
    tokens_total += tokens;

    // 1: compress, run every task, compare with the naive oracle
    const auto t0 = Clock::now();
    const Grammar g = compress_corpus(files);
    const Dag dag = build_dag(g);
    const auto decompressed = decompress_files(g);
    std::vector<std::string> outputs;
    for (TaskKind kind : kAllTasks) {
      const std::string got = run_tsv(dag, g, kind, config(4), main_pool);
      const std::string want =
          to_tsv(naive_run(decompressed, g.dictionary.num_words(), kind, 3), g.dictionary);
      if (got != want) c.oracle.fail("seed ", seed, " ", to_string(kind), ": outputs differ");
      outputs.push_back(got);
    }
    oracle_s += seconds_since(t0);

    check_laws(files, g, seed, c.laws);
    check_weights_and_rounds(dag, tokens, seed, main_pool, c.weights, c.rounds);
    check_window_bound(dag, seed, main_pool, c.window_bound);

    // 5: every worker count and strategy must reproduce the same bytes
    for (std::size_t t = 0; t < std::size(kAllTasks); ++t) {
      const std::string want = fnv1a_hex(outputs[t]);
      for (Strategy s : {Strategy::kTopDown, Strategy::kBottomUp}) {
        for (std::size_t i = 0; i < pools.size(); ++i) {
          const std::string got =
              fnv1a_hex(run_tsv(dag, g, kAllTasks[t], config(worker_counts[i], s), *pools[i]));
          if (got != want) {
            c.determinism.fail("seed ", seed, " ", to_string(kAllTasks[t]), " ", to_string(s),
                               " workers=", worker_counts[i], ": ", got, " != ", want);
          }
        }
      }
    }
  }

  std::ostringstream d;
  d.precision(1);
  d << std::fixed << kCorpora << " corpora, " << tokens_total << " tokens, " << oracle_s
    << " s of 300 s budget";
  c.oracle.expect(oracle_s < 300.0, "runtime budget exceeded");
  c.oracle.note(d.str());
  return c;
}

// 6: eight writers against one table, replayed sequentially.
Check run_table_stress() {
  Check c("6 concurrent table: 8 workers x 1e6 ops vs sequential replay");
  constexpr unsigned kWorkers = 8;
  constexpr std::uint64_t kOps = 1'000'000;
  constexpr std::uint64_t kKeys = 50'000;

  std::mt19937_64 key_rng(2024);
  std::vector<std::uint64_t> keys(kKeys);
  for (auto& k : keys) k = key_rng();

  struct Op {
    std::uint64_t key, delta;
  };
  std::vector<std::vector<Op>> ops(kWorkers);
  for (unsigned w = 0; w < kWorkers; ++w) {
    std::mt19937_64 rng(1000 + w);
    // half the traffic on a small hot set, to force lock and chain contention
    std::uniform_int_distribution<std::uint64_t> any(0, kKeys - 1), hot(0, 63), delta(1, 1000);
    ops[w].reserve(kOps);
    for (std::uint64_t i = 0; i < kOps; ++i) {
      const std::uint64_t k = (rng() & 1) ? keys[hot(rng)] : keys[any(rng)];
      ops[w].push_back({k, delta(rng)});
    }
  }

  ConcurrentCountTable table(kKeys);
  std::vector<std::thread> threads;
  const auto t0 = Clock::now();
  for (unsigned w = 0; w < kWorkers; ++w) {
    threads.emplace_back([&, w] {
      for (const Op& op : ops[w]) table.insert_or_add(op.key, op.delta);
    });
  }
  for (auto& t : threads) t.join();
  const double secs = seconds_since(t0);

  std::unordered_map<std::uint64_t, std::uint64_t> replay;
  for (const auto& list : ops) {
    for (const Op& op : list) replay[op.key] += op.delta;
  }
  c.expect(table.size() == replay.size(), "distinct key count differs");
  for (const auto& [k, v] : replay) {
    const auto got = table.get(k);
    if (!got || *got != v) c.fail("key ", k, ": ", got.value_or(0), " != ", v);
  }
  c.expect(table.view().chains_well_formed(), "bucket chains are malformed");

  std::ostringstream d;
  d << replay.size() << " keys, " << kWorkers * kOps << " ops in " << secs << " s";
  c.note(d.str());
  return c;
}

// 8: the two-file fixture, both strategies, one and four workers.
Check run_golden() {
  Check c("8 fixture G1 golden outputs");
  const Grammar g = compress_corpus(testkit::g1_files());
  c.expect(g == testkit::g1_grammar(), "grammar shape differs from root=[R1,R2,#0,R2,#1]");
  const Dag dag = build_dag(g);
  c.expect(dag.depth == 2, "depth != 2");

  RoundExecutor exec(4);
  TraversalState st(dag.num_rules());
  init_top_down_masks(dag, st);
  top_down_traverse(dag, st, {}, config(4), exec);
  c.expect(st.weight_of(1) == 3 && st.weight_of(2) == 2, "weights != {R1:3,R2:2}");

  using W = WordCountList;
  const W wc{{0, 3}, {1, 3}, {2, 2}};
  const TermVectors tv{{W{{0, 2}, {1, 2}, {2, 1}}, W{{0, 1}, {1, 1}, {2, 1}}}};
  const InvertedIndex ii{{{0, {0, 1}}, {1, {0, 1}}, {2, {0, 1}}}};
  const SequenceCounts sc{{{{{0, 1, 0}, 1}, {{0, 1, 2}, 1}, {{1, 0, 1}, 1}}, {{{0, 1, 2}, 1}}}};
  const RankedInvertedIndex ranked{
      {{{0, 1, 0}, {{0, 1}}}, {{0, 1, 2}, {{0, 1}, {1, 1}}}, {{1, 0, 1}, {{0, 1}}}}};

  for (unsigned workers : {1u, 4u}) {
    RoundExecutor pool(workers);
    for (Strategy s : {Strategy::kTopDown, Strategy::kBottomUp}) {
      const std::string tag = std::string(to_string(s)) + " workers=" + std::to_string(workers);
      auto run = [&](TaskKind kind) {
        TaskOptions o;
        o.kind = kind;
        o.traversal = config(workers, s);
        return run_task(dag, o, pool);
      };
      c.expect(run(TaskKind::kWordCount) == TaskOutput{WordCounts{wc}}, "word count, " + tag);
      c.expect(run(TaskKind::kSort) == TaskOutput{SortedWords{wc}}, "sort, " + tag);
      c.expect(run(TaskKind::kInvertedIndex) == TaskOutput{ii}, "inverted index, " + tag);
      c.expect(run(TaskKind::kTermVector) == TaskOutput{tv}, "term vectors, " + tag);
      c.expect(run(TaskKind::kSequenceCount) == TaskOutput{sc}, "sequence counts, " + tag);
      c.expect(run(TaskKind::kRankedInvertedIndex) == TaskOutput{ranked}, "ranked index, " + tag);
      c.expect(to_tsv(run(TaskKind::kWordCount), g.dictionary) == "a\t3\nb\t3\nc\t2\n",
               "word count TSV, " + tag);
    }
  }
  return c;
}

// 9: a 1 MB seed repeated 100 times, timed three ways.
Check run_performance(bool& report_only) {
  Check c("9 performance: 100 MB corpus, parallel word count vs sequential and naive");
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  report_only = cores < 4;

  std::mt19937_64 rng(99);
  std::vector<double> zipf(20000);
  for (std::size_t i = 0; i < zipf.size(); ++i) zipf[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::uint32_t> pick(zipf.begin(), zipf.end());
  std::vector<std::string> seed;
  std::uint64_t seed_bytes = 0;
  while (seed_bytes < (1u << 20)) {
    seed.push_back("w" + std::to_string(pick(rng)));
    seed_bytes += seed.back().size() + 1;
  }
  std::vector<CorpusFile> files(100);
  for (std::size_t f = 0; f < files.size(); ++f) {
    files[f].name = "copy" + std::to_string(f);
    files[f].tokens = seed;
  }

  const auto t0 = Clock::now();
  const Grammar g = compress_corpus(files);
  const double compress_s = seconds_since(t0);
  files.clear();
  const Dag dag = build_dag(g);

  auto median_of = [](auto&& fn) {
    std::vector<double> t;
    for (int i = 0; i < 3; ++i) {
      const auto s = Clock::now();
      fn();
      t.push_back(seconds_since(s));
    }
    std::sort(t.begin(), t.end());
    return t[1];
  };
  TaskOptions o;
  o.kind = TaskKind::kWordCount;
  WordCounts par_out, seq_out;
  RoundExecutor par_pool(8), seq_pool(1);
  o.traversal = config(8);
  const double par = median_of([&] { par_out = std::get<WordCounts>(run_task(dag, o, par_pool)); });
  o.traversal = config(1);
  const double seq = median_of([&] { seq_out = std::get<WordCounts>(run_task(dag, o, seq_pool)); });
  TaskOutput naive_out;
  const double naive = median_of([&] {
    naive_out = naive_run(decompress_files(g), g.dictionary.num_words(), TaskKind::kWordCount);
  });

  c.expect(par_out == seq_out && naive_out == TaskOutput{par_out}, "outputs differ");
  const double vs_seq = seq / std::max(par, 1e-9), vs_naive = naive / std::max(par, 1e-9);
  if (!report_only) {
    c.expect(vs_seq >= 2.0, "speedup vs sequential below 2x");
    c.expect(vs_naive >= 2.0, "speedup vs naive below 2x");
  }
  std::ostringstream d;
  d.precision(2);
  d << std::fixed << seed_bytes * 100 / 1e6 << " MB, " << cores << " cores, compress "
    << compress_s << " s, parallel " << par * 1e3 << " ms, sequential " << seq * 1e3
    << " ms, naive " << naive * 1e3 << " ms, speedup " << vs_seq << "x / " << vs_naive << "x";
  if (report_only) d << "; fewer than 4 cores, not gated";
  c.note(d.str());
  return c;
}

}  // namespace

int main() {
  bool all_ok = true;
  try {
    FuzzChecks fuzz = run_fuzz();
    Check stress = run_table_stress();
    Check golden = run_golden();
    bool perf_report_only = false;
    Check perf = run_performance(perf_report_only);

    for (const Check* c : {&fuzz.oracle, &fuzz.laws, &fuzz.weights, &fuzz.rounds,
                           &fuzz.determinism, &stress, &fuzz.window_bound, &golden}) {
      c->print();
      all_ok = all_ok && c->ok();
    }
    perf.print(perf_report_only && perf.ok());
    all_ok = all_ok && perf.ok();
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance aborted: " << e.what() << '\n';
    return 1;
  }
  std::cout << (all_ok ? "acceptance: all criteria met\n" : "acceptance: FAILED\n");
  return all_ok ? 0 : 1;
}
