// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/sequitur.hpp"

#include "gtadoc/error.hpp"

namespace gtadoc {

SequiturBuilder::SequiturBuilder(SymbolSpace space) : space_(space) {
  digrams_.reserve(1024);
  new_rule();  // root, id 0
}

std::uint32_t SequiturBuilder::new_node(std::uint32_t value) {
  std::uint32_t n;
  if (!free_nodes_.empty()) {
    n = free_nodes_.back();
    free_nodes_.pop_back();
    nodes_[n] = Node{value, kNil, kNil, kNil};
  } else {
    n = static_cast<std::uint32_t>(nodes_.size());
    if (n == kNil) throw Error(ErrorCode::kResource, "grammar node space exhausted");
    nodes_.push_back(Node{value, kNil, kNil, kNil});
  }
  return n;
}

std::uint32_t SequiturBuilder::new_rule() {
  std::uint32_t id;
  if (!free_ids_.empty()) {
    id = free_ids_.top();
    free_ids_.pop();
  } else {
    id = static_cast<std::uint32_t>(rules_.size());
    if (std::uint64_t{space_.rule_base()} + id >= kNil) {
      throw Error(ErrorCode::kResource, "rule id space exhausted");
    }
    rules_.emplace_back();
  }
  // Guards carry a value no real symbol can take.
  const std::uint32_t g = new_node(kNil);
  nodes_[g].guard_of = id;
  nodes_[g].prev = nodes_[g].next = g;
  rules_[id] = RuleRec{g, 0};
  ++live_rules_;
  return id;
}

void SequiturBuilder::free_node(std::uint32_t n) {
  nodes_[n] = Node{kNil, kNil, kNil, kNil};
  free_nodes_.push_back(n);
}

void SequiturBuilder::delete_digram(std::uint32_t n) {
  if (is_guard(n) || is_guard(nodes_[n].next)) return;
  auto it = digrams_.find(digram_key(n));
  if (it != digrams_.end() && it->second == n) digrams_.erase(it);
}

void SequiturBuilder::join(std::uint32_t left, std::uint32_t right) {
  if (nodes_[left].next != kNil) {
    delete_digram(left);
    // Overlapping triples (x x x) only record the second pair; when that
    // pair goes away the first one must be put back.
    const Node& r = nodes_[right];
    if (r.prev != kNil && r.next != kNil && r.value == nodes_[r.prev].value &&
        r.value == nodes_[r.next].value) {
      digrams_[digram_key(right)] = right;
    }
    const Node& l = nodes_[left];
    if (l.prev != kNil && l.next != kNil && l.value == nodes_[l.next].value &&
        l.value == nodes_[l.prev].value) {
      digrams_[digram_key(l.prev)] = l.prev;
    }
  }
  nodes_[left].next = right;
  nodes_[right].prev = left;
}

void SequiturBuilder::insert_after(std::uint32_t at, std::uint32_t n) {
  join(n, nodes_[at].next);
  join(at, n);
}

void SequiturBuilder::remove(std::uint32_t n) {
  join(nodes_[n].prev, nodes_[n].next);
  if (!is_guard(n)) {
    delete_digram(n);
    if (is_rule_ref(n)) --rules_[rule_of(n)].count;
  }
  free_node(n);
}

bool SequiturBuilder::check(std::uint32_t n) {
  if (is_guard(n) || is_guard(nodes_[n].next)) return false;
  auto [it, inserted] = digrams_.try_emplace(digram_key(n), n);
  if (inserted) return false;
  const std::uint32_t other = it->second;
  if (other != n && nodes_[other].next != n) match(n, other);
  return true;
}

void SequiturBuilder::substitute(std::uint32_t n, std::uint32_t rule) {
  const std::uint32_t q = nodes_[n].prev;
  remove(nodes_[q].next);
  remove(nodes_[q].next);
  const std::uint32_t ref = new_node(space_.rule_symbol(rule));
  ++rules_[rule].count;
  insert_after(q, ref);
  if (!check(q)) check(nodes_[q].next);
}

void SequiturBuilder::match(std::uint32_t fresh, std::uint32_t existing) {
  std::uint32_t rule;
  const std::uint32_t before = nodes_[existing].prev;
  const std::uint32_t after = nodes_[nodes_[existing].next].next;
  if (is_guard(before) && is_guard(after)) {
    // The existing occurrence already is a complete rule body.
    rule = nodes_[before].guard_of;
    substitute(fresh, rule);
  } else {
    rule = new_rule();
    for (std::uint32_t src : {fresh, nodes_[fresh].next}) {
      const std::uint32_t copy = new_node(nodes_[src].value);
      if (is_rule_ref(copy)) ++rules_[rule_of(copy)].count;
      insert_after(last(rule), copy);
    }
    substitute(existing, rule);
    substitute(fresh, rule);
    digrams_[digram_key(first(rule))] = first(rule);
  }

  if (rules_[rule].guard == kNil) return;
  const std::uint32_t head = first(rule);
  if (is_rule_ref(head) && rules_[rule_of(head)].count == 1) expand(head);
}

void SequiturBuilder::expand(std::uint32_t n) {
  const std::uint32_t rule = rule_of(n);
  const std::uint32_t left = nodes_[n].prev;
  const std::uint32_t right = nodes_[n].next;
  const std::uint32_t f = first(rule);
  const std::uint32_t l = last(rule);

  // Drop the rule's guard, closing its body into a ring for the moment.
  const std::uint32_t guard = rules_[rule].guard;
  join(l, f);
  free_node(guard);
  rules_[rule] = RuleRec{};
  free_ids_.push(rule);
  --live_rules_;

  delete_digram(n);
  join(left, right);
  delete_digram(n);
  free_node(n);

  join(left, f);
  join(l, right);
  digrams_[digram_key(l)] = l;
}

void SequiturBuilder::push(SymbolId symbol) {
  if (symbol >= space_.rule_base()) {
    throw Error(ErrorCode::kUsage, "stream symbol " + std::to_string(symbol) +
                                       " is not a word or splitter");
  }
  const std::uint32_t n = new_node(symbol);
  insert_after(last(0), n);
  check(nodes_[n].prev);
}

Grammar SequiturBuilder::finish(Dictionary dictionary) {
  std::vector<std::uint32_t> dense(rules_.size(), kNil);
  std::uint32_t next = 0;
  for (std::uint32_t id = 0; id < rules_.size(); ++id) {
    if (rules_[id].guard != kNil) dense[id] = next++;
  }

  Grammar g;
  g.dictionary = std::move(dictionary);
  g.rules.resize(next);
  for (std::uint32_t id = 0; id < rules_.size(); ++id) {
    if (dense[id] == kNil) continue;
    auto& body = g.rules[dense[id]];
    for (std::uint32_t n = first(id); !is_guard(n); n = nodes_[n].next) {
      body.push_back(is_rule_ref(n) ? space_.rule_symbol(dense[rule_of(n)]) : nodes_[n].value);
    }
  }

  nodes_.clear();
  free_nodes_.clear();
  rules_.clear();
  free_ids_ = {};
  digrams_.clear();
  live_rules_ = 0;
  new_rule();
  return g;
}

Grammar sequitur_infer(Dictionary dictionary, std::span<const SymbolId> stream) {
  SequiturBuilder builder(dictionary.space());
  builder.push(stream);
  return builder.finish(std::move(dictionary));
}

Grammar compress_corpus(std::span<const CorpusFile> files) {
  CorpusStream stream = build_corpus_stream(files);
  return sequitur_infer(std::move(stream.dictionary), stream.symbols);
}

}  // namespace gtadoc
