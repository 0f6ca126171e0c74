// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "gtadoc/dag.hpp"
#include "gtadoc/engine.hpp"
#include "gtadoc/executor.hpp"
#include "gtadoc/traversal.hpp"

namespace gtadoc {

// wordSize + (l-1) * subRuleSize - (l-1), floored at 0: the number of
// l-windows in a body whose sub-rules are replaced by heads of at most l-1
// words.
std::uint64_t head_tail_bound(std::uint64_t word_size, std::uint32_t l,
                              std::uint64_t sub_rule_size) noexcept;

struct HeadTail {
  std::vector<SymbolId> head;  // first min(l-1, exp_len) words
  std::vector<SymbolId> tail;  // last min(l-1, exp_len) words
  std::uint64_t exp_len = 0;
  bool ready = false;
};

struct HeadTailTable {
  std::uint32_t l = 0;
  std::vector<HeadTail> rules;  // rules[0] is left empty
  std::uint32_t rounds = 0;
};

// Rounds over the rules whose buffers are still missing. A head can be filled
// once every sub-rule touched by the first l-1 expansion words was ready at
// the start of the round; tails likewise from the end. Throws
// Error(kCorruption) past dag.depth rounds. Requires l >= 2.
HeadTailTable init_head_tail(const Dag& dag, std::uint32_t l, const TraversalConfig& cfg,
                             RoundExecutor& exec);

// Inlined sub-rule material that the sub-rule counts itself.
struct OwnedRegion {
  std::uint32_t begin;  // stream positions [begin, end)
  std::uint32_t end;
  std::uint32_t rule;
  bool split;  // head and tail inlined around a gap
};

// A rule body flattened to words for window scanning.
struct LocalStream {
  std::vector<SymbolId> words;
  std::vector<std::uint32_t> gaps;  // p: no window may cover both p-1 and p
  std::vector<OwnedRegion> regions;

  // Start positions of the l-windows this stream's rule is responsible for.
  std::vector<std::uint32_t> windows(std::uint32_t l) const;
};

// Non-root rule body. Sub-rules shorter than l are inlined whole and unowned;
// those up to 2(l-1) long are inlined whole as an owned region; longer ones
// become head, gap, tail inside one owned region.
LocalStream build_local_stream(const Dag& dag, const HeadTailTable& ht, std::uint32_t rule);
// The root part of one file.
LocalStream build_segment_stream(const Dag& dag, const HeadTailTable& ht, std::uint32_t file);
// The whole root, splitters turned into gaps.
LocalStream build_root_stream(const Dag& dag, const HeadTailTable& ht);

// l-windows in the body with every sub-rule replaced by its head only.
std::uint64_t head_only_window_count(const Dag& dag, const HeadTailTable& ht, std::uint32_t rule);

// Maps an l-gram to a 64-bit key. Ids are packed w bits each, first word in
// the high bits, so packed keys sort like their id sequences. When l * w
// exceeds 64 the key is a fingerprint and the gram is kept in a registry.
class GramCodec {
 public:
  GramCodec(const SymbolSpace& space, std::uint32_t num_rules, std::uint32_t l);

  std::uint32_t length() const noexcept { return l_; }
  std::uint32_t width() const noexcept { return w_; }
  bool packed() const noexcept { return packed_; }

  // Thread-safe. Throws Error(kOverflow) if two grams share a fingerprint.
  std::uint64_t encode(std::span<const SymbolId> gram);
  std::vector<SymbolId> decode(std::uint64_t key) const;
  std::size_t registry_size() const;

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::mutex mu;
    std::unordered_map<std::uint64_t, std::vector<SymbolId>> grams;
  };

  std::uint32_t l_;
  std::uint32_t w_;
  bool packed_;
  std::unique_ptr<std::array<Shard, kShards>> shards_;
};

// Per-rule window elements: rule r holds the distinct windows its stream is
// responsible for; segments hold each file's root windows. l == 1 reduces to
// own words.
RuleElements window_elements(const Dag& dag, const HeadTailTable& ht, GramCodec& codec,
                             RoundExecutor& exec);

struct SequenceStats {
  std::uint32_t head_tail_rounds = 0;
  double init_ms = 0;  // head/tail buffers and window elements
  EngineStats engine;
};

// Global l-gram counts keyed by codec keys, ascending key. kAuto runs top-down.
CountMap count_sequences(const Dag& dag, GramCodec& codec, const TraversalConfig& cfg,
                         RoundExecutor& exec, SequenceStats* stats = nullptr);

// The same counts split by file.
std::vector<CountMap> count_sequences_per_file(const Dag& dag, GramCodec& codec,
                                               const TraversalConfig& cfg, RoundExecutor& exec,
                                               SequenceStats* stats = nullptr);

}  // namespace gtadoc
