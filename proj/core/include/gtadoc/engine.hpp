// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "gtadoc/dag.hpp"
#include "gtadoc/executor.hpp"
#include "gtadoc/memory_pool.hpp"
#include "gtadoc/traversal.hpp"

namespace gtadoc {

struct KeyCount {
  std::uint64_t key;
  std::uint64_t count;
  bool operator==(const KeyCount&) const = default;
};

// Ascending by key.
using CountMap = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

// What every rule contributes by itself, before any sub-rule material is
// merged in: its own words (word count family) or the windows it owns
// (sequence family). Keys are opaque 64-bit values.
struct RuleElements {
  std::vector<std::vector<KeyCount>> rule;     // rule[0]: all root material
  std::vector<std::vector<KeyCount>> segment;  // root material, per file
  // Upper bound on the distinct keys anywhere in a rule's expansion.
  std::vector<std::uint64_t> key_limit;
  // Upper bound on distinct keys overall.
  std::uint64_t universe = 0;
};

// Own-word elements: key = word id, count = frequency in the body.
RuleElements word_elements(const Dag& dag);

struct EngineStats {
  std::uint32_t top_down_rounds = 0;
  std::uint32_t bound_rounds = 0;
  std::uint32_t bottom_up_rounds = 0;
  std::uint32_t retry_rounds = 0;  // extra rounds spent on busy entry locks
};

// global(k) = sum over non-root r of count(r, k) * weight(r) + root count(k).
// `state` holds weights from a finished top-down traversal.
CountMap reduce_top_down(const Dag& dag, const TraversalState& state,
                         const RuleElements& elements, const TraversalConfig& cfg,
                         RoundExecutor& exec, EngineStats* stats = nullptr);

// Bottom-up local tables: locTbl(r) = own elements + freq * locTbl(c) for
// every sub-rule. All tables share one pool sized by gen_loc_tbl_bounds.
struct LocalTables {
  std::vector<std::uint64_t> bounds;    // raw bounds
  std::vector<std::uint64_t> capacity;  // bounds clipped to key_limit
  MemoryPool pool;

  CountTableView table(std::uint32_t rule) const { return pool.table(rule); }
};

LocalTables build_local_tables(const Dag& dag, TraversalState& state,
                               const RuleElements& elements, const TraversalConfig& cfg,
                               RoundExecutor& exec, EngineStats* stats = nullptr);

// Root material plus level-2 local tables scaled by their root frequency.
CountMap reduce_bottom_up(const Dag& dag, const LocalTables& locals,
                          const RuleElements& elements, const TraversalConfig& cfg,
                          RoundExecutor& exec, EngineStats* stats = nullptr);
// The same merge restricted to each file's part of the root.
std::vector<CountMap> reduce_bottom_up_per_file(const Dag& dag, const LocalTables& locals,
                                                const RuleElements& elements,
                                                const TraversalConfig& cfg, RoundExecutor& exec,
                                                EngineStats* stats = nullptr);

// weight of every non-root rule split by file, ascending file id.
struct FileWeights {
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> rule;
};

// Two top-down passes: scalar weights bound each rule's file count
// (min(files, weight)), then per-file weights travel along the edges in
// pool-backed tables.
FileWeights propagate_file_weights(const Dag& dag, TraversalState& state,
                                   const TraversalConfig& cfg, RoundExecutor& exec,
                                   EngineStats* stats = nullptr);

std::vector<CountMap> reduce_top_down_per_file(const Dag& dag, const FileWeights& weights,
                                               const RuleElements& elements,
                                               const TraversalConfig& cfg, RoundExecutor& exec,
                                               EngineStats* stats = nullptr);

// Set of files per rule: a bitset while the corpus has at most
// cfg.file_set_width files, otherwise a sorted id list behind a lock.
class FileSets {
 public:
  FileSets(std::uint32_t num_rules, std::uint32_t num_files, unsigned width);

  bool dense() const noexcept { return dense_; }
  void add(std::uint32_t rule, std::uint32_t file);
  // files(child) |= files(parent)
  void merge(std::uint32_t child, std::uint32_t parent);
  std::vector<std::uint32_t> files(std::uint32_t rule) const;

 private:
  bool dense_;
  std::uint32_t words_per_rule_ = 0;
  std::unique_ptr<std::atomic<std::uint64_t>[]> bits_;
  std::vector<std::vector<std::uint32_t>> lists_;
  std::unique_ptr<std::mutex[]> locks_;
};

// Seeds level-2 rules from the root segments, then ORs sets down the edges.
FileSets propagate_file_sets(const Dag& dag, TraversalState& state, const TraversalConfig& cfg,
                             RoundExecutor& exec, EngineStats* stats = nullptr);

// word -> ascending files, from top-down file sets. Index = word id.
std::vector<std::vector<std::uint32_t>> reduce_file_sets(const Dag& dag, const FileSets& sets,
                                                         const TraversalConfig& cfg,
                                                         RoundExecutor& exec,
                                                         EngineStats* stats = nullptr);

}  // namespace gtadoc
