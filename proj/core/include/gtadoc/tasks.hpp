// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gtadoc/dag.hpp"
#include "gtadoc/engine.hpp"
#include "gtadoc/executor.hpp"
#include "gtadoc/traversal.hpp"

namespace gtadoc {

enum class TaskKind {
  kWordCount,
  kSort,
  kInvertedIndex,
  kTermVector,
  kSequenceCount,
  kRankedInvertedIndex,
};

inline constexpr TaskKind kAllTasks[] = {
    TaskKind::kWordCount,  TaskKind::kSort,          TaskKind::kInvertedIndex,
    TaskKind::kTermVector, TaskKind::kSequenceCount, TaskKind::kRankedInvertedIndex,
};

const char* to_string(TaskKind t) noexcept;
std::optional<TaskKind> parse_task(std::string_view name) noexcept;

// Tasks whose output is split by file.
bool needs_file_info(TaskKind t) noexcept;
bool uses_sequences(TaskKind t) noexcept;

// An explicit cfg.strategy wins. Otherwise per-file tasks over more files
// than a file set can hold go bottom-up, and everything else top-down.
Strategy select_strategy(TaskKind t, const Dag& dag, const TraversalConfig& cfg) noexcept;

using Gram = std::vector<SymbolId>;
using WordCountList = std::vector<std::pair<SymbolId, std::uint64_t>>;

struct WordCounts {
  WordCountList words;  // ascending id, counts > 0
  bool operator==(const WordCounts&) const = default;
};
struct SortedWords {
  WordCountList words;  // descending count, then ascending id
  bool operator==(const SortedWords&) const = default;
};
struct InvertedIndex {
  std::vector<std::pair<SymbolId, std::vector<std::uint32_t>>> words;  // ascending id
  bool operator==(const InvertedIndex&) const = default;
};
struct TermVectors {
  std::vector<WordCountList> files;  // per file: descending count, then ascending id
  bool operator==(const TermVectors&) const = default;
};
struct SequenceCounts {
  std::vector<std::vector<std::pair<Gram, std::uint64_t>>> files;  // ascending gram
  bool operator==(const SequenceCounts&) const = default;
};
struct RankedInvertedIndex {
  // ascending gram; files by descending count, then ascending file id
  std::vector<std::pair<Gram, std::vector<std::pair<std::uint32_t, std::uint64_t>>>> grams;
  bool operator==(const RankedInvertedIndex&) const = default;
};

using TaskOutput = std::variant<WordCounts, SortedWords, InvertedIndex, TermVectors,
                                SequenceCounts, RankedInvertedIndex>;

struct TaskOptions {
  TaskKind kind = TaskKind::kWordCount;
  std::uint32_t length = 3;  // sequence tasks only
  TraversalConfig traversal;
};

struct TaskReport {
  Strategy strategy = Strategy::kTopDown;
  double init_ms = 0;       // element lists, head/tail buffers, masks
  double traversal_ms = 0;  // traversals and reductions
  std::uint32_t head_tail_rounds = 0;
  EngineStats engine;
};

// Runs one task on the compressed form. The strategy comes from
// select_strategy.
TaskOutput run_task(const Dag& dag, const TaskOptions& options, RoundExecutor& exec,
                    TaskReport* report = nullptr);

WordCounts word_count(const Dag& dag, const TraversalConfig& cfg, RoundExecutor& exec,
                      TaskReport* report = nullptr);
SortedWords sort_by_frequency(const Dag& dag, const TraversalConfig& cfg, RoundExecutor& exec,
                              TaskReport* report = nullptr);
InvertedIndex inverted_index(const Dag& dag, const TraversalConfig& cfg, RoundExecutor& exec,
                             TaskReport* report = nullptr);
TermVectors term_vector(const Dag& dag, const TraversalConfig& cfg, RoundExecutor& exec,
                        TaskReport* report = nullptr);
SequenceCounts sequence_count(const Dag& dag, std::uint32_t l, const TraversalConfig& cfg,
                              RoundExecutor& exec, TaskReport* report = nullptr);
RankedInvertedIndex ranked_inverted_index(const Dag& dag, std::uint32_t l,
                                          const TraversalConfig& cfg, RoundExecutor& exec,
                                          TaskReport* report = nullptr);

// Orderings shared with the naive path.
SortedWords sort_counts(const WordCounts& counts);
void rank_word_list(WordCountList& list);
RankedInvertedIndex transpose(const SequenceCounts& counts);

// One record per line, tab-separated, grams joined by single spaces. Files
// are written as their 0-based ids.
void write_tsv(std::ostream& out, const TaskOutput& output, const Dictionary& dictionary);
std::string to_tsv(const TaskOutput& output, const Dictionary& dictionary);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace gtadoc
