// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/dag.hpp"

#include <algorithm>
#include <unordered_map>

#include "gtadoc/error.hpp"

namespace gtadoc {
namespace {

std::vector<RuleFreq> aggregate_rules(const SymbolSpace& space, std::span<const SymbolId> body) {
  std::vector<RuleFreq> out;
  std::unordered_map<std::uint32_t, std::size_t> slot;
  for (SymbolId s : body) {
    if (space.classify(s) != SymbolKind::kRule) continue;
    const std::uint32_t r = space.rule_index(s);
    auto [it, fresh] = slot.try_emplace(r, out.size());
    if (fresh) {
      out.push_back({r, 1});
    } else {
      ++out[it->second].freq;
    }
  }
  return out;
}

}  // namespace

Dag build_dag(const Grammar& grammar) {
  Dag dag;
  dag.space = grammar.space();
  const SymbolSpace& space = dag.space;
  const std::uint32_t n = grammar.num_rules();
  if (n == 0) throw Error(ErrorCode::kCorruption, "grammar has no root");
  dag.rules.resize(n);

  for (std::uint32_t r = 0; r < n; ++r) {
    Rule& rule = dag.rules[r];
    rule.body = grammar.rules[r];
    dag.total_elements += rule.body.size();
    std::unordered_map<SymbolId, std::uint32_t> words;
    for (SymbolId s : rule.body) {
      switch (space.classify(s)) {
        case SymbolKind::kWord:
          ++words[s];
          ++rule.word_size;
          break;
        case SymbolKind::kSplitter:
          if (r != Grammar::kRootIndex) {
            throw Error(ErrorCode::kCorruption,
                        "file splitter inside non-root rule " + std::to_string(r));
          }
          break;
        case SymbolKind::kRule: {
          const std::uint32_t c = space.rule_index(s);
          if (c == Grammar::kRootIndex || c >= n) {
            throw Error(ErrorCode::kCorruption, "rule " + std::to_string(r) +
                                                    " references unknown rule " + std::to_string(c));
          }
          ++rule.sub_rule_size;
          break;
        }
      }
    }
    rule.own_words.reserve(words.size());
    for (auto [w, f] : words) rule.own_words.push_back({w, f});
    std::sort(rule.own_words.begin(), rule.own_words.end(),
              [](const WordFreq& a, const WordFreq& b) { return a.word < b.word; });
    rule.sub_rules = aggregate_rules(space, rule.body);
    rule.num_out_edge = static_cast<std::uint32_t>(rule.sub_rules.size());
  }

  for (std::uint32_t r = 0; r < n; ++r) {
    for (const RuleFreq& e : dag.rules[r].sub_rules) {
      Rule& child = dag.rules[e.rule];
      child.parent_ids.push_back(r);
      if (r != Grammar::kRootIndex) child.num_in_edge += e.freq;
    }
  }

  // Kahn order from the root over distinct edges.
  std::vector<std::uint32_t> pending(n);
  for (std::uint32_t r = 0; r < n; ++r) {
    pending[r] = static_cast<std::uint32_t>(dag.rules[r].parent_ids.size());
    if (r != Grammar::kRootIndex && pending[r] == 0) {
      throw Error(ErrorCode::kCorruption, "rule " + std::to_string(r) + " is unreachable");
    }
  }
  if (pending[0] != 0) throw Error(ErrorCode::kCorruption, "root is referenced");
  std::vector<std::uint32_t> order;
  order.reserve(n);
  order.push_back(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Rule& rule = dag.rules[order[i]];
    for (const RuleFreq& e : rule.sub_rules) {
      Rule& child = dag.rules[e.rule];
      child.level = std::max(child.level, rule.level + 1);
      if (--pending[e.rule] == 0) order.push_back(e.rule);
    }
  }
  if (order.size() != n) throw Error(ErrorCode::kCorruption, "rule references form a cycle");

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Rule& rule = dag.rules[*it];
    rule.exp_len = rule.word_size;
    for (const RuleFreq& e : rule.sub_rules) {
      const Rule& child = dag.rules[e.rule];
      rule.exp_len += std::uint64_t{e.freq} * child.exp_len;
      rule.height = std::max(rule.height, child.height + 1);
    }
  }
  dag.depth = dag.rules[0].height;

  const auto& root = dag.rules[0].body;
  std::uint32_t begin = 0;
  for (std::uint32_t i = 0; i < root.size(); ++i) {
    if (space.classify(root[i]) != SymbolKind::kSplitter) continue;
    if (space.file_of(root[i]) != dag.segments.size()) {
      throw Error(ErrorCode::kCorruption, "file splitters out of order");
    }
    dag.segments.push_back({begin, i});
    dag.segment_rules.push_back(aggregate_rules(
        space, std::span<const SymbolId>(root).subspan(begin, i - begin)));
    begin = i + 1;
  }
  // A splitter-free grammar (a bare stream) has no files; its root still counts
  // toward global results.
  if (dag.segments.size() != space.num_splitters ||
      (space.num_splitters > 0 && begin != root.size())) {
    throw Error(ErrorCode::kCorruption, "root does not end every file with its splitter");
  }
  return dag;
}

}  // namespace gtadoc
