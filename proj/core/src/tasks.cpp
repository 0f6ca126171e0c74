// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "gtadoc/error.hpp"
#include "gtadoc/sequence.hpp"

namespace gtadoc {

const char* to_string(TaskKind t) noexcept {
  switch (t) {
    case TaskKind::kWordCount: return "wordcount";
    case TaskKind::kSort: return "sort";
    case TaskKind::kInvertedIndex: return "invertedindex";
    case TaskKind::kTermVector: return "termvector";
    case TaskKind::kSequenceCount: return "seqcount";
    case TaskKind::kRankedInvertedIndex: return "ranked";
  }
  return "wordcount";
}

std::optional<TaskKind> parse_task(std::string_view name) noexcept {
  for (TaskKind t : kAllTasks) {
    if (name == to_string(t)) return t;
  }
  if (name == "sequencecount") return TaskKind::kSequenceCount;
  if (name == "rankedinvertedindex") return TaskKind::kRankedInvertedIndex;
  return std::nullopt;
}

bool needs_file_info(TaskKind t) noexcept {
  return t != TaskKind::kWordCount && t != TaskKind::kSort;
}

bool uses_sequences(TaskKind t) noexcept {
  return t == TaskKind::kSequenceCount || t == TaskKind::kRankedInvertedIndex;
}

Strategy select_strategy(TaskKind t, const Dag& dag, const TraversalConfig& cfg) noexcept {
  if (cfg.strategy != Strategy::kAuto) return cfg.strategy;
  if (needs_file_info(t) && dag.num_files() > cfg.file_set_width) return Strategy::kBottomUp;
  return Strategy::kTopDown;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Phase timer feeding TaskReport. Anything not explicitly marked as
// initialization counts as traversal.
class Phases {
 public:
  explicit Phases(TaskReport* report) : report_(report), t_(Clock::now()) {}
  void init_done() { lap(report_ ? &report_->init_ms : nullptr); }
  void traversal_done() { lap(report_ ? &report_->traversal_ms : nullptr); }

 private:
  void lap(double* into) {
    const auto now = Clock::now();
    if (into) *into += std::chrono::duration<double, std::milli>(now - t_).count();
    t_ = now;
  }
  TaskReport* report_;
  Clock::time_point t_;
};

TraversalConfig resolved(TaskKind t, const Dag& dag, const TraversalConfig& cfg,
                         TaskReport* report) {
  cfg.validate();
  TraversalConfig out = cfg;
  out.strategy = select_strategy(t, dag, cfg);
  if (report) report->strategy = out.strategy;
  return out;
}

EngineStats* engine_of(TaskReport* report) { return report ? &report->engine : nullptr; }

WordCountList to_word_list(const CountMap& map) {
  WordCountList out;
  out.reserve(map.size());
  for (auto [k, v] : map) {
    if (v != 0) out.emplace_back(static_cast<SymbolId>(k), v);
  }
  return out;
}

std::vector<CountMap> per_file_words(const Dag& dag, const TraversalConfig& cfg,
                                     RoundExecutor& exec, TaskReport* report) {
  Phases phases(report);
  const RuleElements el = word_elements(dag);
  TraversalState state(dag.num_rules());
  phases.init_done();
  std::vector<CountMap> out;
  if (cfg.strategy == Strategy::kBottomUp) {
    const LocalTables locals = build_local_tables(dag, state, el, cfg, exec, engine_of(report));
    out = reduce_bottom_up_per_file(dag, locals, el, cfg, exec, engine_of(report));
  } else {
    const FileWeights fw = propagate_file_weights(dag, state, cfg, exec, engine_of(report));
    out = reduce_top_down_per_file(dag, fw, el, cfg, exec, engine_of(report));
  }
  phases.traversal_done();
  return out;
}

std::vector<CountMap> per_file_sequences(const Dag& dag, const TraversalConfig& cfg,
                                         RoundExecutor& exec, TaskReport* report,
                                         GramCodec& codec) {
  Clock::time_point t0 = Clock::now();
  SequenceStats ss;
  auto out = count_sequences_per_file(dag, codec, cfg, exec, &ss);
  if (report) {
    report->head_tail_rounds = ss.head_tail_rounds;
    report->engine = ss.engine;
    report->init_ms += ss.init_ms;
    report->traversal_ms += std::max(0.0, ms_since(t0) - ss.init_ms);
  }
  return out;
}

}  // namespace

void rank_word_list(WordCountList& list) {
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

SortedWords sort_counts(const WordCounts& counts) {
  SortedWords out{counts.words};
  rank_word_list(out.words);
  return out;
}

RankedInvertedIndex transpose(const SequenceCounts& counts) {
  std::map<Gram, std::vector<std::pair<std::uint32_t, std::uint64_t>>> by_gram;
  for (std::uint32_t f = 0; f < counts.files.size(); ++f) {
    for (const auto& [gram, c] : counts.files[f]) by_gram[gram].emplace_back(f, c);
  }
  RankedInvertedIndex out;
  out.grams.reserve(by_gram.size());
  for (auto& [gram, files] : by_gram) {
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    out.grams.emplace_back(gram, std::move(files));
  }
  return out;
}

WordCounts word_count(const Dag& dag, const TraversalConfig& cfg_in, RoundExecutor& exec,
                      TaskReport* report) {
  const TraversalConfig cfg = resolved(TaskKind::kWordCount, dag, cfg_in, report);
  Phases phases(report);
  const RuleElements el = word_elements(dag);
  TraversalState state(dag.num_rules());
  phases.init_done();
  CountMap counts;
  if (cfg.strategy == Strategy::kBottomUp) {
    const LocalTables locals = build_local_tables(dag, state, el, cfg, exec, engine_of(report));
    counts = reduce_bottom_up(dag, locals, el, cfg, exec, engine_of(report));
  } else {
    init_top_down_masks(dag, state);
    const TraversalStats ts = top_down_traverse(dag, state, TaskHooks{}, cfg, exec);
    if (report) report->engine.top_down_rounds = ts.rounds;
    counts = reduce_top_down(dag, state, el, cfg, exec, engine_of(report));
  }
  phases.traversal_done();
  return WordCounts{to_word_list(counts)};
}

SortedWords sort_by_frequency(const Dag& dag, const TraversalConfig& cfg, RoundExecutor& exec,
                              TaskReport* report) {
  TraversalConfig c = cfg;
  c.strategy = select_strategy(TaskKind::kSort, dag, cfg);
  return sort_counts(word_count(dag, c, exec, report));
}

InvertedIndex inverted_index(const Dag& dag, const TraversalConfig& cfg_in, RoundExecutor& exec,
                             TaskReport* report) {
  const TraversalConfig cfg = resolved(TaskKind::kInvertedIndex, dag, cfg_in, report);
  std::vector<std::vector<std::uint32_t>> lists;
  if (cfg.strategy == Strategy::kBottomUp) {
    const auto files = per_file_words(dag, cfg, exec, report);
    lists.resize(dag.space.num_words);
    for (std::uint32_t f = 0; f < files.size(); ++f) {
      for (auto [w, c] : files[f]) {
        if (c != 0) lists[w].push_back(f);
      }
    }
  } else {
    Phases phases(report);
    TraversalState state(dag.num_rules());
    phases.init_done();
    const FileSets sets = propagate_file_sets(dag, state, cfg, exec, engine_of(report));
    lists = reduce_file_sets(dag, sets, cfg, exec, engine_of(report));
    phases.traversal_done();
  }
  InvertedIndex out;
  for (SymbolId w = 0; w < lists.size(); ++w) {
    if (!lists[w].empty()) out.words.emplace_back(w, std::move(lists[w]));
  }
  return out;
}

TermVectors term_vector(const Dag& dag, const TraversalConfig& cfg_in, RoundExecutor& exec,
                        TaskReport* report) {
  const TraversalConfig cfg = resolved(TaskKind::kTermVector, dag, cfg_in, report);
  const auto files = per_file_words(dag, cfg, exec, report);
  TermVectors out;
  out.files.reserve(files.size());
  for (const CountMap& m : files) {
    out.files.push_back(to_word_list(m));
    rank_word_list(out.files.back());
  }
  return out;
}

SequenceCounts sequence_count(const Dag& dag, std::uint32_t l, const TraversalConfig& cfg_in,
                              RoundExecutor& exec, TaskReport* report) {
  const TraversalConfig cfg = resolved(TaskKind::kSequenceCount, dag, cfg_in, report);
  GramCodec codec(dag.space, dag.num_rules(), l);
  const auto files = per_file_sequences(dag, cfg, exec, report, codec);
  SequenceCounts out;
  out.files.resize(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    auto& dst = out.files[f];
    dst.reserve(files[f].size());
    for (auto [k, c] : files[f]) {
      if (c != 0) dst.emplace_back(codec.decode(k), c);
    }
    if (!codec.packed()) std::sort(dst.begin(), dst.end());
  }
  return out;
}

RankedInvertedIndex ranked_inverted_index(const Dag& dag, std::uint32_t l,
                                          const TraversalConfig& cfg, RoundExecutor& exec,
                                          TaskReport* report) {
  TraversalConfig c = cfg;
  c.strategy = select_strategy(TaskKind::kRankedInvertedIndex, dag, cfg);
  return transpose(sequence_count(dag, l, c, exec, report));
}

TaskOutput run_task(const Dag& dag, const TaskOptions& options, RoundExecutor& exec,
                    TaskReport* report) {
  if (uses_sequences(options.kind) && options.length == 0) {
    throw Error(ErrorCode::kUsage, "sequence length must be at least 1");
  }
  const TraversalConfig& cfg = options.traversal;
  switch (options.kind) {
    case TaskKind::kWordCount: return word_count(dag, cfg, exec, report);
    case TaskKind::kSort: return sort_by_frequency(dag, cfg, exec, report);
    case TaskKind::kInvertedIndex: return inverted_index(dag, cfg, exec, report);
    case TaskKind::kTermVector: return term_vector(dag, cfg, exec, report);
    case TaskKind::kSequenceCount: return sequence_count(dag, options.length, cfg, exec, report);
    case TaskKind::kRankedInvertedIndex:
      return ranked_inverted_index(dag, options.length, cfg, exec, report);
  }
  throw Error(ErrorCode::kUsage, "unknown task");
}

namespace {

void write_gram(std::ostream& out, const Gram& gram, const Dictionary& dict) {
  for (std::size_t i = 0; i < gram.size(); ++i) {
    if (i) out << ' ';
    out << dict.word(gram[i]);
  }
}

struct TsvWriter {
  std::ostream& out;
  const Dictionary& dict;

  void operator()(const WordCounts& o) const {
    for (auto [w, c] : o.words) out << dict.word(w) << '\t' << c << '\n';
  }
  void operator()(const SortedWords& o) const {
    for (auto [w, c] : o.words) out << dict.word(w) << '\t' << c << '\n';
  }
  void operator()(const InvertedIndex& o) const {
    for (const auto& [w, files] : o.words) {
      out << dict.word(w);
      for (std::uint32_t f : files) out << '\t' << f;
      out << '\n';
    }
  }
  void operator()(const TermVectors& o) const {
    for (std::size_t f = 0; f < o.files.size(); ++f) {
      for (auto [w, c] : o.files[f]) out << f << '\t' << dict.word(w) << '\t' << c << '\n';
    }
  }
  void operator()(const SequenceCounts& o) const {
    for (std::size_t f = 0; f < o.files.size(); ++f) {
      for (const auto& [gram, c] : o.files[f]) {
        out << f << '\t';
        write_gram(out, gram, dict);
        out << '\t' << c << '\n';
      }
    }
  }
  void operator()(const RankedInvertedIndex& o) const {
    for (const auto& [gram, files] : o.grams) {
      for (auto [f, c] : files) {
        write_gram(out, gram, dict);
        out << '\t' << f << '\t' << c << '\n';
      }
    }
  }
};

}  // namespace

void write_tsv(std::ostream& out, const TaskOutput& output, const Dictionary& dictionary) {
  std::visit(TsvWriter{out, dictionary}, output);
}

std::string to_tsv(const TaskOutput& output, const Dictionary& dictionary) {
  std::ostringstream ss;
  write_tsv(ss, output, dictionary);
  return std::move(ss).str();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gtadoc
