// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "gtadoc/grammar.hpp"

namespace gtadoc {

// Online Sequitur inference. Symbols are appended left to right; the grammar
// keeps digram uniqueness and rule utility after every append. A new rule
// takes the lowest rule id not currently in use, and finish() renumbers the
// surviving rules densely in id order (root = 0).
class SequiturBuilder {
 public:
  explicit SequiturBuilder(SymbolSpace space);

  void push(SymbolId symbol);
  void push(std::span<const SymbolId> symbols) {
    for (SymbolId s : symbols) push(s);
  }

  std::size_t live_rules() const noexcept { return live_rules_; }

  // Emits the grammar; the builder is left empty.
  Grammar finish(Dictionary dictionary);

 private:
  static constexpr std::uint32_t kNil = UINT32_MAX;

  struct Node {
    std::uint32_t value;
    std::uint32_t prev;
    std::uint32_t next;
    std::uint32_t guard_of;  // rule id for guard nodes, kNil otherwise
  };

  struct RuleRec {
    std::uint32_t guard = kNil;
    std::uint32_t count = 0;
  };

  bool is_guard(std::uint32_t n) const { return nodes_[n].guard_of != kNil; }
  bool is_rule_ref(std::uint32_t n) const {
    return !is_guard(n) && nodes_[n].value >= space_.rule_base();
  }
  std::uint32_t rule_of(std::uint32_t n) const { return nodes_[n].value - space_.rule_base(); }
  std::uint32_t first(std::uint32_t rule) const { return nodes_[rules_[rule].guard].next; }
  std::uint32_t last(std::uint32_t rule) const { return nodes_[rules_[rule].guard].prev; }
  std::uint64_t digram_key(std::uint32_t n) const {
    return (std::uint64_t{nodes_[n].value} << 32) | nodes_[nodes_[n].next].value;
  }

  std::uint32_t new_node(std::uint32_t value);
  std::uint32_t new_rule();
  void free_node(std::uint32_t n);

  void join(std::uint32_t left, std::uint32_t right);
  void insert_after(std::uint32_t at, std::uint32_t n);
  void remove(std::uint32_t n);
  void delete_digram(std::uint32_t n);
  bool check(std::uint32_t n);
  void substitute(std::uint32_t n, std::uint32_t rule);
  void match(std::uint32_t fresh, std::uint32_t existing);
  void expand(std::uint32_t n);

  SymbolSpace space_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> free_nodes_;
  std::vector<RuleRec> rules_;
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> free_ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> digrams_;
  std::size_t live_rules_ = 0;
};

// Infers a grammar for a complete stream (words and splitters of
// `dictionary`). Deterministic: equal inputs give equal grammars.
Grammar sequitur_infer(Dictionary dictionary, std::span<const SymbolId> stream);

// build_corpus_stream followed by sequitur_infer.
Grammar compress_corpus(std::span<const CorpusFile> files);

}  // namespace gtadoc
