// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "gtadoc/grammar.hpp"

namespace gtadoc {

struct WordFreq {
  SymbolId word;
  std::uint32_t freq;
  bool operator==(const WordFreq&) const = default;
};

struct RuleFreq {
  std::uint32_t rule;
  std::uint32_t freq;
  bool operator==(const RuleFreq&) const = default;
};

// Root body positions [begin, end) of one file, splitter excluded.
struct Segment {
  std::uint32_t begin;
  std::uint32_t end;
  bool operator==(const Segment&) const = default;
};

// Frozen topology of one grammar rule. Mutable traversal counters live in
// TraversalState.
struct Rule {
  std::vector<SymbolId> body;
  std::vector<WordFreq> own_words;   // ascending word id
  std::vector<RuleFreq> sub_rules;   // order of first reference in the body
  std::vector<std::uint32_t> parent_ids;  // ascending, distinct, root included
  std::uint32_t num_in_edge = 0;     // references from non-root parents, with frequency
  std::uint32_t num_out_edge = 0;    // distinct sub-rules
  std::uint32_t word_size = 0;       // word symbols in the body
  std::uint32_t sub_rule_size = 0;   // rule references in the body
  std::uint64_t exp_len = 0;         // words in the full expansion
  std::uint32_t level = 0;           // longest path from the root
  std::uint32_t height = 0;          // longest path down to a leaf
};

class Dag {
 public:
  SymbolSpace space;
  std::vector<Rule> rules;  // rules[0] is the root
  std::vector<Segment> segments;
  // Per file: (rule, frequency) of the rules referenced directly by that
  // file's part of the root, in order of first reference.
  std::vector<std::vector<RuleFreq>> segment_rules;
  std::uint32_t depth = 0;
  std::uint64_t total_elements = 0;

  std::uint32_t num_rules() const noexcept { return static_cast<std::uint32_t>(rules.size()); }
  std::uint32_t num_files() const noexcept {
    return static_cast<std::uint32_t>(segments.size());
  }
  const Rule& root() const { return rules[0]; }
};

// Throws Error(kCorruption) on cycles, unreachable rules, or references to
// unknown rules.
Dag build_dag(const Grammar& grammar);

}  // namespace gtadoc
