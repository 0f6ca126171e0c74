// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/traversal.hpp"

#include <algorithm>
#include <string>

#include "gtadoc/error.hpp"

namespace gtadoc {

const char* to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::kAuto: return "auto";
    case Strategy::kTopDown: return "topdown";
    case Strategy::kBottomUp: return "bottomup";
  }
  return "auto";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
  if (name == "auto") return Strategy::kAuto;
  if (name == "topdown" || name == "top-down") return Strategy::kTopDown;
  if (name == "bottomup" || name == "bottom-up") return Strategy::kBottomUp;
  return std::nullopt;
}

void TraversalConfig::validate() const {
  if (workers == 0) throw Error(ErrorCode::kUsage, "workers must be at least 1");
  if (chunk_factor == 0) throw Error(ErrorCode::kUsage, "chunk factor must be at least 1");
  if (file_set_width == 0) throw Error(ErrorCode::kUsage, "file set width must be at least 1");
}

std::vector<WorkUnit> partition_work(std::span<const ReadyItem> ready,
                                     std::uint64_t total_elements, const TraversalConfig& cfg) {
  std::vector<WorkUnit> units;
  if (ready.empty()) return units;
  const std::uint64_t avg = std::max<std::uint64_t>(1, total_elements / ready.size());
  const std::uint64_t threshold = std::uint64_t{std::max(1u, cfg.chunk_factor)} * avg;
  units.reserve(ready.size());
  for (const ReadyItem& item : ready) {
    std::uint64_t pieces = 1;
    if (item.length > threshold) pieces = (item.length + threshold - 1) / threshold;
    if (item.rule == 0) {
      pieces = std::max(pieces, std::min<std::uint64_t>(item.length, std::max(1u, cfg.workers)));
    }
    pieces = std::max<std::uint64_t>(1, pieces);
    const std::uint64_t base = item.length / pieces;
    const std::uint64_t extra = item.length % pieces;
    std::uint64_t begin = 0;
    for (std::uint64_t p = 0; p < pieces; ++p) {
      const std::uint64_t len = base + (p < extra ? 1 : 0);
      units.push_back({item.rule, begin, begin + len, p == 0});
      begin += len;
    }
  }
  return units;
}

TraversalState::TraversalState(std::uint32_t num_rules)
    : n_(num_rules),
      weight_(std::make_unique<std::atomic<std::uint64_t>[]>(num_rules)),
      cur_in_(std::make_unique<std::atomic<std::uint32_t>[]>(num_rules)),
      cur_out_(std::make_unique<std::atomic<std::uint32_t>[]>(num_rules)),
      mask_(std::make_unique<std::atomic<std::uint8_t>[]>(num_rules)),
      visits_(std::make_unique<std::atomic<std::uint32_t>[]>(num_rules)) {}

std::vector<std::uint64_t> TraversalState::weights() const {
  std::vector<std::uint64_t> out(n_);
  for (std::uint32_t r = 0; r < n_; ++r) out[r] = weight_[r].load();
  return out;
}

void TraversalState::reset() {
  for (std::uint32_t r = 0; r < n_; ++r) {
    weight_[r].store(0, std::memory_order_relaxed);
    cur_in_[r].store(0, std::memory_order_relaxed);
    cur_out_[r].store(0, std::memory_order_relaxed);
    mask_[r].store(0, std::memory_order_relaxed);
    visits_[r].store(0, std::memory_order_relaxed);
  }
}

namespace {

// Ready rules for the next round, appended concurrently.
class Frontier {
 public:
  explicit Frontier(std::uint32_t capacity) : slots_(capacity) {}

  void push(std::uint32_t r) { slots_[size_.fetch_add(1, std::memory_order_relaxed)] = r; }

  std::vector<std::uint32_t> take_sorted() {
    std::vector<std::uint32_t> out(slots_.begin(), slots_.begin() + size_.load());
    std::sort(out.begin(), out.end());
    size_.store(0);
    return out;
  }

 private:
  std::vector<std::uint32_t> slots_;
  std::atomic<std::uint32_t> size_{0};
};

void check_round_budget(const Dag& dag, std::uint32_t rounds) {
  if (rounds > dag.depth + 1) {
    throw Error(ErrorCode::kCorruption, "traversal exceeded " + std::to_string(dag.depth + 1) +
                                            " rounds; rule graph is not acyclic");
  }
}

}  // namespace

void init_top_down_masks(const Dag& dag, TraversalState& state) {
  state.reset();
  for (const RuleFreq& e : dag.root().sub_rules) state.weight(e.rule).store(e.freq);
  for (std::uint32_t r = 1; r < dag.num_rules(); ++r) {
    state.mask(r).store(dag.rules[r].num_in_edge == 0 ? 1 : 0);
  }
}

TraversalStats top_down_traverse(const Dag& dag, TraversalState& state, const TaskHooks& hooks,
                                 const TraversalConfig& cfg, RoundExecutor& exec) {
  TraversalStats stats;
  std::vector<std::uint32_t> ready;
  for (std::uint32_t r = 1; r < dag.num_rules(); ++r) {
    if (state.masked(r)) ready.push_back(r);
  }
  Frontier next(dag.num_rules());
  std::vector<ReadyItem> items;

  while (!ready.empty()) {
    check_round_budget(dag, ++stats.rounds);
    std::atomic<bool> stop{true};
    items.clear();
    std::uint64_t total = 0;
    for (std::uint32_t r : ready) {
      items.push_back({r, dag.rules[r].sub_rules.size()});
      total += dag.rules[r].sub_rules.size();
    }
    const auto units = partition_work(items, total, cfg);

    exec.parallel_for(units.size(), [&](std::size_t u) {
      const WorkUnit& unit = units[u];
      const Rule& rule = dag.rules[unit.rule];
      const std::uint64_t w = state.weight(unit.rule).load(std::memory_order_relaxed);
      for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
        const RuleFreq& e = rule.sub_rules[i];
        state.weight(e.rule).fetch_add(std::uint64_t{e.freq} * w, std::memory_order_relaxed);
        if (hooks.on_edge) hooks.on_edge(unit.rule, e.rule, e.freq);
        const std::uint32_t reached =
            state.cur_in_edge(e.rule).fetch_add(e.freq, std::memory_order_acq_rel) + e.freq;
        const std::uint32_t full = dag.rules[e.rule].num_in_edge;
        if (reached > full) {
          throw Error(ErrorCode::kCorruption,
                      "rule " + std::to_string(e.rule) + " received too many in-edges");
        }
        if (reached == full) {
          state.mask(e.rule).store(1, std::memory_order_relaxed);
          next.push(e.rule);
          stop.store(false, std::memory_order_relaxed);
        }
      }
      if (hooks.visit) hooks.visit(unit);
      if (unit.leader) {
        state.mask(unit.rule).store(0, std::memory_order_relaxed);
        state.visits(unit.rule).fetch_add(1, std::memory_order_relaxed);
      }
    });

    ready = next.take_sorted();
    if (stop.load() != ready.empty()) {
      throw Error(ErrorCode::kCorruption, "stop flag disagrees with the ready set");
    }
  }
  return stats;
}

void init_bottom_up_masks(const Dag& dag, TraversalState& state) {
  for (std::uint32_t r = 0; r < dag.num_rules(); ++r) {
    state.cur_out_edge(r).store(0, std::memory_order_relaxed);
    state.visits(r).store(0, std::memory_order_relaxed);
    state.mask(r).store(r != 0 && dag.rules[r].sub_rules.empty() ? 1 : 0,
                        std::memory_order_relaxed);
  }
}

TraversalStats bottom_up_traverse(const Dag& dag, TraversalState& state, const TaskHooks& hooks,
                                  const TraversalConfig& cfg, RoundExecutor& exec) {
  TraversalStats stats;
  std::vector<std::uint32_t> ready;
  for (std::uint32_t r = 1; r < dag.num_rules(); ++r) {
    if (state.masked(r)) ready.push_back(r);
  }
  Frontier next(dag.num_rules());
  std::vector<ReadyItem> items;

  while (!ready.empty()) {
    check_round_budget(dag, ++stats.rounds);
    items.clear();
    std::uint64_t total = 0;
    for (std::uint32_t r : ready) {
      const Rule& rule = dag.rules[r];
      const std::uint64_t len = hooks.unit_length
                                    ? hooks.unit_length(r)
                                    : rule.own_words.size() + rule.sub_rules.size();
      items.push_back({r, len});
      total += len;
    }
    const auto units = partition_work(items, total, cfg);

    exec.parallel_for(units.size(), [&](std::size_t u) {
      const WorkUnit& unit = units[u];
      if (hooks.visit) hooks.visit(unit);
      if (!unit.leader) return;
      for (std::uint32_t p : dag.rules[unit.rule].parent_ids) {
        if (p == 0) continue;
        const std::uint32_t reached =
            state.cur_out_edge(p).fetch_add(1, std::memory_order_acq_rel) + 1;
        if (reached == dag.rules[p].num_out_edge) {
          state.mask(p).store(1, std::memory_order_relaxed);
          next.push(p);
        }
      }
      state.mask(unit.rule).store(0, std::memory_order_relaxed);
      state.visits(unit.rule).fetch_add(1, std::memory_order_relaxed);
    });

    ready = next.take_sorted();
  }
  return stats;
}

std::vector<std::uint64_t> gen_loc_tbl_bounds(const Dag& dag, TraversalState& state,
                                              std::span<const std::uint64_t> own,
                                              const TraversalConfig& cfg, RoundExecutor& exec,
                                              TraversalStats* stats) {
  const std::uint32_t n = dag.num_rules();
  if (!own.empty() && own.size() != n) {
    throw Error(ErrorCode::kUsage, "own-bound table does not match the rule count");
  }
  auto bounds = std::make_unique<std::atomic<std::uint64_t>[]>(n);

  init_bottom_up_masks(dag, state);
  TaskHooks hooks;
  hooks.unit_length = [&](std::uint32_t r) { return dag.rules[r].sub_rules.size(); };
  hooks.visit = [&](const WorkUnit& unit) {
    const Rule& rule = dag.rules[unit.rule];
    std::uint64_t sum = 0;
    if (unit.leader) sum += own.empty() ? rule.own_words.size() : own[unit.rule];
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      sum += bounds[rule.sub_rules[i].rule].load(std::memory_order_relaxed);
    }
    bounds[unit.rule].fetch_add(sum, std::memory_order_relaxed);
  };
  const TraversalStats s = bottom_up_traverse(dag, state, hooks, cfg, exec);
  if (stats) *stats = s;

  std::vector<std::uint64_t> out(n);
  for (std::uint32_t r = 1; r < n; ++r) out[r] = bounds[r].load();
  return out;
}

}  // namespace gtadoc
