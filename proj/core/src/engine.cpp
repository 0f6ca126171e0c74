// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/engine.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "gtadoc/error.hpp"

namespace gtadoc {
namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw Error(ErrorCode::kOverflow, "scaled count exceeds 64 bits");
  }
  return a * b;
}

std::uint64_t clip(std::uint64_t bound, std::uint64_t universe) {
  return universe == 0 ? bound : std::min(bound, universe);
}

CountMap sorted_items(const CountTableView& table) {
  CountMap out = table.items();
  std::sort(out.begin(), out.end());
  return out;
}

struct PendingAdd {
  std::uint32_t table;
  std::uint64_t key;
  std::uint64_t delta;
};

// Inserts into a set of output tables with the lock-or-retry protocol: an
// insert that finds its entry lock taken is parked and replayed in a later
// round, so no worker ever waits on a lock.
class RetrySink {
 public:
  explicit RetrySink(const MemoryPool& pool) {
    tables_.reserve(pool.slots());
    for (std::size_t s = 0; s < pool.slots(); ++s) tables_.push_back(pool.table(s));
  }

  void add(std::uint32_t table, std::uint64_t key, std::uint64_t delta,
           std::vector<PendingAdd>& parked) {
    if (delta == 0) return;
    if (tables_[table].try_insert_or_add(key, delta) == InsertStatus::kBusy) {
      parked.push_back({table, key, delta});
    }
  }

  void park(std::vector<PendingAdd>& parked) {
    if (parked.empty()) return;
    std::lock_guard lock(mu_);
    pending_.insert(pending_.end(), parked.begin(), parked.end());
    parked.clear();
  }

  // Replays parked inserts until a round parks nothing; returns the rounds.
  std::uint32_t settle(RoundExecutor& exec) {
    std::uint32_t rounds = 0;
    constexpr std::size_t kChunk = 256;
    while (!pending_.empty()) {
      ++rounds;
      std::vector<PendingAdd> batch;
      batch.swap(pending_);
      exec.parallel_for((batch.size() + kChunk - 1) / kChunk, [&](std::size_t c) {
        std::vector<PendingAdd> parked;
        const std::size_t end = std::min(batch.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
          add(batch[i].table, batch[i].key, batch[i].delta, parked);
        }
        park(parked);
      });
    }
    return rounds;
  }

 private:
  std::vector<CountTableView> tables_;
  std::mutex mu_;
  std::vector<PendingAdd> pending_;
};

void note_retry(EngineStats* stats, std::uint32_t rounds) {
  if (stats) stats->retry_rounds += rounds;
}

}  // namespace

RuleElements word_elements(const Dag& dag) {
  RuleElements el;
  const std::uint32_t n = dag.num_rules();
  el.rule.resize(n);
  el.key_limit.resize(n);
  el.universe = dag.space.num_words;
  for (std::uint32_t r = 0; r < n; ++r) {
    const Rule& rule = dag.rules[r];
    el.rule[r].reserve(rule.own_words.size());
    for (const WordFreq& wf : rule.own_words) el.rule[r].push_back({wf.word, wf.freq});
    el.key_limit[r] = std::min<std::uint64_t>(dag.space.num_words, rule.exp_len);
  }
  el.segment.resize(dag.num_files());
  const auto& root = dag.root().body;
  for (std::uint32_t f = 0; f < dag.num_files(); ++f) {
    std::unordered_map<SymbolId, std::uint64_t> counts;
    for (std::uint32_t i = dag.segments[f].begin; i < dag.segments[f].end; ++i) {
      if (dag.space.classify(root[i]) == SymbolKind::kWord) ++counts[root[i]];
    }
    for (auto [w, c] : counts) el.segment[f].push_back({w, c});
    std::sort(el.segment[f].begin(), el.segment[f].end(),
              [](const KeyCount& a, const KeyCount& b) { return a.key < b.key; });
  }
  return el;
}

CountMap reduce_top_down(const Dag& dag, const TraversalState& state,
                         const RuleElements& elements, const TraversalConfig& cfg,
                         RoundExecutor& exec, EngineStats* stats) {
  std::vector<ReadyItem> items;
  std::uint64_t total = 0;
  for (std::uint32_t r = 0; r < dag.num_rules(); ++r) {
    items.push_back({r, elements.rule[r].size()});
    total += elements.rule[r].size();
  }
  const std::uint64_t bound = clip(total, elements.universe);
  MemoryPool pool(std::span<const std::uint64_t>(&bound, 1));
  RetrySink sink(pool);

  const auto units = partition_work(items, total, cfg);
  exec.parallel_for(units.size(), [&](std::size_t u) {
    const WorkUnit& unit = units[u];
    const std::uint64_t w = unit.rule == 0 ? 1 : state.weight_of(unit.rule);
    const auto& own = elements.rule[unit.rule];
    std::vector<PendingAdd> parked;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      sink.add(0, own[i].key, mul_checked(own[i].count, w), parked);
    }
    sink.park(parked);
  });
  note_retry(stats, sink.settle(exec));
  return sorted_items(pool.table(0));
}

LocalTables build_local_tables(const Dag& dag, TraversalState& state,
                               const RuleElements& elements, const TraversalConfig& cfg,
                               RoundExecutor& exec, EngineStats* stats) {
  const std::uint32_t n = dag.num_rules();
  std::vector<std::uint64_t> own(n, 0);
  for (std::uint32_t r = 1; r < n; ++r) own[r] = elements.rule[r].size();

  LocalTables lt;
  TraversalStats bound_stats;
  lt.bounds = gen_loc_tbl_bounds(dag, state, own, cfg, exec, &bound_stats);
  lt.capacity.assign(n, 0);
  for (std::uint32_t r = 1; r < n; ++r) {
    lt.capacity[r] = std::min(lt.bounds[r], elements.key_limit[r]);
  }
  lt.pool = MemoryPool(lt.capacity);

  init_bottom_up_masks(dag, state);
  TaskHooks hooks;
  hooks.unit_length = [&](std::uint32_t r) {
    return elements.rule[r].size() + dag.rules[r].sub_rules.size();
  };
  hooks.visit = [&](const WorkUnit& unit) {
    CountTableView table = lt.pool.table(unit.rule);
    const auto& own_elems = elements.rule[unit.rule];
    const auto& subs = dag.rules[unit.rule].sub_rules;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      if (i < own_elems.size()) {
        if (own_elems[i].count != 0) table.insert_or_add(own_elems[i].key, own_elems[i].count);
      } else {
        const RuleFreq& e = subs[i - own_elems.size()];
        table.merge_scaled(lt.pool.table(e.rule), e.freq);
      }
    }
  };
  const TraversalStats s = bottom_up_traverse(dag, state, hooks, cfg, exec);
  if (stats) {
    stats->bound_rounds = bound_stats.rounds;
    stats->bottom_up_rounds = s.rounds;
  }
  return lt;
}

CountMap reduce_bottom_up(const Dag& dag, const LocalTables& locals,
                          const RuleElements& elements, const TraversalConfig& cfg,
                          RoundExecutor& exec, EngineStats* stats) {
  const auto& root_elems = elements.rule[0];
  const auto& level2 = dag.root().sub_rules;
  std::uint64_t bound = root_elems.size();
  for (const RuleFreq& e : level2) bound += locals.capacity[e.rule];
  bound = clip(bound, elements.universe);
  MemoryPool pool(std::span<const std::uint64_t>(&bound, 1));
  RetrySink sink(pool);

  const ReadyItem item{0, root_elems.size() + level2.size()};
  const auto units = partition_work(std::span<const ReadyItem>(&item, 1), item.length, cfg);
  exec.parallel_for(units.size(), [&](std::size_t u) {
    const WorkUnit& unit = units[u];
    std::vector<PendingAdd> parked;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      if (i < root_elems.size()) {
        sink.add(0, root_elems[i].key, root_elems[i].count, parked);
      } else {
        const RuleFreq& e = level2[i - root_elems.size()];
        locals.table(e.rule).for_each([&](std::uint64_t k, std::uint64_t v) {
          sink.add(0, k, mul_checked(v, e.freq), parked);
        });
      }
    }
    sink.park(parked);
  });
  note_retry(stats, sink.settle(exec));
  return sorted_items(pool.table(0));
}

std::vector<CountMap> reduce_bottom_up_per_file(const Dag& dag, const LocalTables& locals,
                                                const RuleElements& elements,
                                                const TraversalConfig& cfg, RoundExecutor& exec,
                                                EngineStats* stats) {
  const std::uint32_t files = dag.num_files();
  std::vector<std::uint64_t> bounds(files);
  std::vector<ReadyItem> items;
  std::uint64_t total = 0;
  for (std::uint32_t f = 0; f < files; ++f) {
    std::uint64_t b = elements.segment[f].size();
    for (const RuleFreq& e : dag.segment_rules[f]) b += locals.capacity[e.rule];
    bounds[f] = clip(b, elements.universe);
    const std::uint64_t len = elements.segment[f].size() + dag.segment_rules[f].size();
    items.push_back({f, len});
    total += len;
  }
  MemoryPool pool(bounds);
  RetrySink sink(pool);

  const auto units = partition_work(items, total, cfg);
  exec.parallel_for(units.size(), [&](std::size_t u) {
    const WorkUnit& unit = units[u];
    const std::uint32_t f = unit.rule;
    const auto& seg = elements.segment[f];
    std::vector<PendingAdd> parked;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      if (i < seg.size()) {
        sink.add(f, seg[i].key, seg[i].count, parked);
      } else {
        const RuleFreq& e = dag.segment_rules[f][i - seg.size()];
        locals.table(e.rule).for_each([&](std::uint64_t k, std::uint64_t v) {
          sink.add(f, k, mul_checked(v, e.freq), parked);
        });
      }
    }
    sink.park(parked);
  });
  note_retry(stats, sink.settle(exec));

  std::vector<CountMap> out(files);
  for (std::uint32_t f = 0; f < files; ++f) out[f] = sorted_items(pool.table(f));
  return out;
}

FileWeights propagate_file_weights(const Dag& dag, TraversalState& state,
                                   const TraversalConfig& cfg, RoundExecutor& exec,
                                   EngineStats* stats) {
  const std::uint32_t n = dag.num_rules();
  const std::uint32_t files = dag.num_files();

  // Sizing pass: a rule cannot occur in more files than it has occurrences.
  init_top_down_masks(dag, state);
  const TraversalStats sizing = top_down_traverse(dag, state, TaskHooks{}, cfg, exec);
  std::vector<std::uint64_t> bounds(n, 0);
  for (std::uint32_t r = 1; r < n; ++r) {
    bounds[r] = std::min<std::uint64_t>(files, state.weight_of(r));
  }
  MemoryPool pool(bounds);

  exec.parallel_for(files, [&](std::size_t f) {
    for (const RuleFreq& e : dag.segment_rules[f]) pool.table(e.rule).insert_or_add(f, e.freq);
  });

  init_top_down_masks(dag, state);
  TaskHooks hooks;
  hooks.needs_file_info = true;
  hooks.on_edge = [&](std::uint32_t parent, std::uint32_t child, std::uint32_t freq) {
    pool.table(child).merge_scaled(pool.table(parent), freq);
  };
  const TraversalStats s = top_down_traverse(dag, state, hooks, cfg, exec);
  if (stats) stats->top_down_rounds = std::max(sizing.rounds, s.rounds);

  FileWeights fw;
  fw.rule.resize(n);
  exec.parallel_for(n, [&](std::size_t r) {
    if (r == 0) return;
    auto items = pool.table(static_cast<std::uint32_t>(r)).items();
    std::sort(items.begin(), items.end());
    auto& dst = fw.rule[r];
    dst.reserve(items.size());
    for (auto [f, w] : items) dst.emplace_back(static_cast<std::uint32_t>(f), w);
  });
  return fw;
}

std::vector<CountMap> reduce_top_down_per_file(const Dag& dag, const FileWeights& weights,
                                               const RuleElements& elements,
                                               const TraversalConfig& cfg, RoundExecutor& exec,
                                               EngineStats* stats) {
  const std::uint32_t files = dag.num_files();
  const std::uint32_t n = dag.num_rules();
  std::vector<std::uint64_t> bounds(files, 0);
  for (std::uint32_t f = 0; f < files; ++f) bounds[f] = elements.segment[f].size();
  std::vector<ReadyItem> items;
  std::uint64_t total = 0;
  for (std::uint32_t r = 1; r < n; ++r) {
    const std::uint64_t len = elements.rule[r].size();
    for (const auto& fw : weights.rule[r]) bounds[fw.first] += len;
    items.push_back({r, len});
    total += len;
  }
  for (auto& b : bounds) b = clip(b, elements.universe);
  MemoryPool pool(bounds);
  RetrySink sink(pool);

  const auto units = partition_work(items, total, cfg);
  exec.parallel_for(units.size(), [&](std::size_t u) {
    const WorkUnit& unit = units[u];
    const auto& own = elements.rule[unit.rule];
    const auto& fws = weights.rule[unit.rule];
    std::vector<PendingAdd> parked;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      for (const auto& [f, w] : fws) sink.add(f, own[i].key, mul_checked(own[i].count, w), parked);
    }
    sink.park(parked);
  });

  std::vector<ReadyItem> seg_items;
  std::uint64_t seg_total = 0;
  for (std::uint32_t f = 0; f < files; ++f) {
    seg_items.push_back({f, elements.segment[f].size()});
    seg_total += elements.segment[f].size();
  }
  const auto seg_units = partition_work(seg_items, seg_total, cfg);
  exec.parallel_for(seg_units.size(), [&](std::size_t u) {
    const WorkUnit& unit = seg_units[u];
    const auto& seg = elements.segment[unit.rule];
    std::vector<PendingAdd> parked;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      sink.add(unit.rule, seg[i].key, seg[i].count, parked);
    }
    sink.park(parked);
  });
  note_retry(stats, sink.settle(exec));

  std::vector<CountMap> out(files);
  for (std::uint32_t f = 0; f < files; ++f) out[f] = sorted_items(pool.table(f));
  return out;
}

FileSets::FileSets(std::uint32_t num_rules, std::uint32_t num_files, unsigned width)
    : dense_(num_files <= width) {
  if (dense_) {
    words_per_rule_ = (num_files + 63) / 64;
    bits_ = std::make_unique<std::atomic<std::uint64_t>[]>(std::size_t{num_rules} *
                                                           words_per_rule_);
  } else {
    lists_.resize(num_rules);
    locks_ = std::make_unique<std::mutex[]>(num_rules);
  }
}

void FileSets::add(std::uint32_t rule, std::uint32_t file) {
  if (dense_) {
    bits_[std::size_t{rule} * words_per_rule_ + file / 64].fetch_or(
        std::uint64_t{1} << (file % 64), std::memory_order_relaxed);
    return;
  }
  std::lock_guard lock(locks_[rule]);
  auto& list = lists_[rule];
  auto it = std::lower_bound(list.begin(), list.end(), file);
  if (it == list.end() || *it != file) list.insert(it, file);
}

void FileSets::merge(std::uint32_t child, std::uint32_t parent) {
  if (dense_) {
    for (std::uint32_t i = 0; i < words_per_rule_; ++i) {
      const std::uint64_t bits =
          bits_[std::size_t{parent} * words_per_rule_ + i].load(std::memory_order_relaxed);
      if (bits) {
        bits_[std::size_t{child} * words_per_rule_ + i].fetch_or(bits, std::memory_order_relaxed);
      }
    }
    return;
  }
  // The parent's set is final by the time it pushes to its children.
  const auto& src = lists_[parent];
  std::lock_guard lock(locks_[child]);
  auto& dst = lists_[child];
  std::vector<std::uint32_t> merged;
  merged.reserve(src.size() + dst.size());
  std::set_union(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(merged));
  dst.swap(merged);
}

std::vector<std::uint32_t> FileSets::files(std::uint32_t rule) const {
  if (!dense_) return lists_[rule];
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < words_per_rule_; ++i) {
    std::uint64_t bits = bits_[std::size_t{rule} * words_per_rule_ + i].load();
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(i * 64 + static_cast<std::uint32_t>(b));
      bits &= bits - 1;
    }
  }
  return out;
}

FileSets propagate_file_sets(const Dag& dag, TraversalState& state, const TraversalConfig& cfg,
                             RoundExecutor& exec, EngineStats* stats) {
  FileSets sets(dag.num_rules(), dag.num_files(), cfg.file_set_width);
  exec.parallel_for(dag.num_files(), [&](std::size_t f) {
    for (const RuleFreq& e : dag.segment_rules[f]) {
      sets.add(e.rule, static_cast<std::uint32_t>(f));
    }
  });
  init_top_down_masks(dag, state);
  TaskHooks hooks;
  hooks.needs_file_info = true;
  hooks.on_edge = [&](std::uint32_t parent, std::uint32_t child, std::uint32_t) {
    sets.merge(child, parent);
  };
  const TraversalStats s = top_down_traverse(dag, state, hooks, cfg, exec);
  if (stats) stats->top_down_rounds = s.rounds;
  return sets;
}

std::vector<std::vector<std::uint32_t>> reduce_file_sets(const Dag& dag, const FileSets& sets,
                                                         const TraversalConfig& cfg,
                                                         RoundExecutor& exec,
                                                         EngineStats* stats) {
  const std::uint32_t n = dag.num_rules();
  const std::uint32_t files = dag.num_files();
  const RuleElements words = word_elements(dag);

  std::vector<std::vector<std::uint32_t>> rule_files(n);
  exec.parallel_for(n, [&](std::size_t r) {
    if (r != 0) rule_files[r] = sets.files(static_cast<std::uint32_t>(r));
  });

  std::uint64_t bound = 0;
  std::vector<ReadyItem> items;
  std::uint64_t total = 0;
  for (std::uint32_t r = 1; r < n; ++r) {
    bound += words.rule[r].size() * rule_files[r].size();
    items.push_back({r, words.rule[r].size()});
    total += words.rule[r].size();
  }
  for (std::uint32_t f = 0; f < files; ++f) bound += words.segment[f].size();
  bound = std::min<std::uint64_t>(bound, std::uint64_t{dag.space.num_words} * files);
  MemoryPool pool(std::span<const std::uint64_t>(&bound, 1));
  RetrySink sink(pool);

  auto presence = [](std::uint64_t word, std::uint32_t file) { return word << 32 | file; };
  const auto units = partition_work(items, total, cfg);
  exec.parallel_for(units.size(), [&](std::size_t u) {
    const WorkUnit& unit = units[u];
    std::vector<PendingAdd> parked;
    for (std::uint64_t i = unit.begin; i < unit.end; ++i) {
      for (std::uint32_t f : rule_files[unit.rule]) {
        sink.add(0, presence(words.rule[unit.rule][i].key, f), 1, parked);
      }
    }
    sink.park(parked);
  });
  exec.parallel_for(files, [&](std::size_t f) {
    std::vector<PendingAdd> parked;
    for (const KeyCount& kc : words.segment[f]) {
      sink.add(0, presence(kc.key, static_cast<std::uint32_t>(f)), 1, parked);
    }
    sink.park(parked);
  });
  note_retry(stats, sink.settle(exec));

  std::vector<std::vector<std::uint32_t>> out(dag.space.num_words);
  pool.table(0).for_each([&](std::uint64_t key, std::uint64_t) {
    out[key >> 32].push_back(static_cast<std::uint32_t>(key & 0xffffffffu));
  });
  for (auto& list : out) std::sort(list.begin(), list.end());
  return out;
}

}  // namespace gtadoc
