// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gtadoc/dag.hpp"
#include "gtadoc/executor.hpp"

namespace gtadoc {

enum class Strategy { kAuto, kTopDown, kBottomUp };

const char* to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;

struct TraversalConfig {
  Strategy strategy = Strategy::kAuto;
  unsigned workers = 1;
  // A rule longer than chunk_factor times the average ready-rule length is
  // split into several work units.
  unsigned chunk_factor = 16;
  // File sets up to this many files are bitsets; larger ones are sorted lists.
  unsigned file_set_width = 64;

  // Throws Error(kUsage) when workers or chunk_factor is zero.
  void validate() const;
};

struct ReadyItem {
  std::uint32_t rule;
  std::uint64_t length;
};

// A contiguous slice [begin, end) of the element list a ready rule walks in
// one round. The leader is the slice starting at 0; it performs the
// once-per-rule bookkeeping.
struct WorkUnit {
  std::uint32_t rule;
  std::uint64_t begin;
  std::uint64_t end;
  bool leader;
};

// threshold = chunk_factor * max(1, total_elements / |ready|). Items no longer
// than the threshold form one unit; longer ones are cut into
// ceil(length / threshold) balanced slices. The root (rule 0) is also cut
// into at least `workers` slices when it has that many elements.
std::vector<WorkUnit> partition_work(std::span<const ReadyItem> ready,
                                     std::uint64_t total_elements, const TraversalConfig& cfg);

// Per-rule counters shared by the workers of a traversal.
class TraversalState {
 public:
  explicit TraversalState(std::uint32_t num_rules);

  std::uint32_t num_rules() const noexcept { return n_; }

  std::atomic<std::uint64_t>& weight(std::uint32_t r) { return weight_[r]; }
  std::atomic<std::uint32_t>& cur_in_edge(std::uint32_t r) { return cur_in_[r]; }
  std::atomic<std::uint32_t>& cur_out_edge(std::uint32_t r) { return cur_out_[r]; }
  std::atomic<std::uint8_t>& mask(std::uint32_t r) { return mask_[r]; }
  std::atomic<std::uint32_t>& visits(std::uint32_t r) { return visits_[r]; }

  std::uint64_t weight_of(std::uint32_t r) const { return weight_[r].load(); }
  bool masked(std::uint32_t r) const { return mask_[r].load() != 0; }
  std::uint32_t visits_of(std::uint32_t r) const { return visits_[r].load(); }
  std::vector<std::uint64_t> weights() const;

  void reset();

 private:
  std::uint32_t n_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> weight_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> cur_in_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> cur_out_;
  std::unique_ptr<std::atomic<std::uint8_t>[]> mask_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> visits_;
};

// Task-specific work plugged into a traversal.
struct TaskHooks {
  // Called for every work unit of a ready rule, concurrently with other units.
  std::function<void(const WorkUnit&)> visit;
  // Length of the element list `visit` walks. Top-down traversals always
  // partition a rule's sub-rule list; bottom-up ones default to
  // |own_words| + |sub_rules|.
  std::function<std::uint64_t(std::uint32_t)> unit_length;
  // Top-down only: extra payload sent along one parent -> child edge.
  std::function<void(std::uint32_t parent, std::uint32_t child, std::uint32_t freq)> on_edge;
  bool needs_file_info = false;
  std::optional<Strategy> preferred;
};

struct TraversalStats {
  std::uint32_t rounds = 0;  // rounds that visited at least one rule
};

// Non-root rules start with their frequency in the root as weight; those
// without non-root in-edges are masked for the first round.
void init_top_down_masks(const Dag& dag, TraversalState& state);

// Rounds over masked rules until a round masks nothing new. A visited rule
// adds freq * weight to each sub-rule and freq to its in-edge counter; a
// sub-rule whose counter reaches num_in_edge is masked for the next round.
// Throws Error(kCorruption) if rounds exceed depth + 1.
TraversalStats top_down_traverse(const Dag& dag, TraversalState& state, const TaskHooks& hooks,
                                 const TraversalConfig& cfg, RoundExecutor& exec);

// Leaves (rules without sub-rules) are masked; out-edge counters cleared.
void init_bottom_up_masks(const Dag& dag, TraversalState& state);

// Rounds over masked rules; after a rule is visited every distinct non-root
// parent gets one out-edge, and a parent whose count reaches num_out_edge is
// masked for the next round.
TraversalStats bottom_up_traverse(const Dag& dag, TraversalState& state, const TaskHooks& hooks,
                                  const TraversalConfig& cfg, RoundExecutor& exec);

// bound(r) = own(r) + sum of bound(c) over distinct sub-rules c, computed
// leaves first. `own` defaults to the number of distinct words in the body.
// The root entry stays 0.
std::vector<std::uint64_t> gen_loc_tbl_bounds(const Dag& dag, TraversalState& state,
                                              std::span<const std::uint64_t> own,
                                              const TraversalConfig& cfg, RoundExecutor& exec,
                                              TraversalStats* stats = nullptr);

}  // namespace gtadoc
