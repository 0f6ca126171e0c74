// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/grammar.hpp"

#include <set>

#include "gtadoc/error.hpp"

namespace gtadoc {

Dictionary::Dictionary(std::vector<std::string> words, std::uint32_t num_splitters)
    : num_splitters_(num_splitters) {
  words_.reserve(words.size());
  for (auto& w : words) {
    if (index_.contains(w)) {
      throw Error(ErrorCode::kFormat, "duplicate dictionary word '" + w + "'");
    }
    index_.emplace(w, static_cast<SymbolId>(words_.size()));
    words_.push_back(std::move(w));
  }
}

SymbolId Dictionary::intern(std::string_view word) {
  if (auto it = index_.find(word); it != index_.end()) return it->second;
  const auto id = static_cast<SymbolId>(words_.size());
  words_.emplace_back(word);
  index_.emplace(words_.back(), id);
  return id;
}

std::optional<SymbolId> Dictionary::find(std::string_view word) const {
  if (auto it = index_.find(word); it != index_.end()) return it->second;
  return std::nullopt;
}

CorpusStream build_corpus_stream(std::span<const CorpusFile> files) {
  if (files.empty()) throw Error(ErrorCode::kUsage, "corpus has no files");
  std::set<std::string_view> names;
  for (const auto& f : files) {
    if (!names.insert(f.name).second) {
      throw Error(ErrorCode::kUsage, "duplicate file name '" + f.name + "'");
    }
  }

  CorpusStream out;
  std::size_t total = files.size();
  for (const auto& f : files) {
    total += f.tokens.size();
    for (const auto& t : f.tokens) out.dictionary.intern(t);
  }
  out.dictionary.set_num_splitters(static_cast<std::uint32_t>(files.size()));

  const SymbolSpace space = out.dictionary.space();
  out.symbols.reserve(total);
  for (std::uint32_t i = 0; i < files.size(); ++i) {
    for (const auto& t : files[i].tokens) out.symbols.push_back(*out.dictionary.find(t));
    out.symbols.push_back(space.splitter(i));
  }
  return out;
}

namespace {

void expand_into(const Grammar& g, SymbolId symbol, std::vector<SymbolId>& out) {
  const SymbolSpace space = g.space();
  struct Frame {
    const std::vector<SymbolId>* body;
    std::size_t pos;
  };
  auto body_of = [&](SymbolId s) -> const std::vector<SymbolId>* {
    const std::uint32_t r = space.rule_index(s);
    if (r == Grammar::kRootIndex || r >= g.num_rules()) {
      throw Error(ErrorCode::kCorruption, "symbol " + std::to_string(s) + " names no rule");
    }
    return &g.rules[r];
  };

  if (space.classify(symbol) != SymbolKind::kRule) {
    out.push_back(symbol);
    return;
  }
  std::vector<Frame> stack{{body_of(symbol), 0}};
  while (!stack.empty()) {
    if (stack.size() > g.rules.size() + 1) {
      throw Error(ErrorCode::kCorruption, "rule references form a cycle");
    }
    Frame& top = stack.back();
    if (top.pos == top.body->size()) {
      stack.pop_back();
      continue;
    }
    const SymbolId s = (*top.body)[top.pos++];
    if (space.classify(s) == SymbolKind::kRule) {
      stack.push_back({body_of(s), 0});
    } else {
      out.push_back(s);
    }
  }
}

}  // namespace

std::vector<SymbolId> expand(const Grammar& grammar, SymbolId symbol) {
  std::vector<SymbolId> out;
  expand_into(grammar, symbol, out);
  return out;
}

std::vector<SymbolId> expand_rule(const Grammar& grammar, std::uint32_t rule) {
  if (rule >= grammar.num_rules()) {
    throw Error(ErrorCode::kCorruption, "rule index " + std::to_string(rule) + " out of range");
  }
  std::vector<SymbolId> out;
  for (SymbolId s : grammar.rules[rule]) expand_into(grammar, s, out);
  return out;
}

std::vector<std::vector<SymbolId>> split_files(const SymbolSpace& space,
                                               std::span<const SymbolId> stream) {
  std::vector<std::vector<SymbolId>> files(space.num_splitters);
  std::vector<SymbolId> current;
  for (SymbolId s : stream) {
    switch (space.classify(s)) {
      case SymbolKind::kWord:
        current.push_back(s);
        break;
      case SymbolKind::kSplitter:
        files.at(space.file_of(s)) = std::move(current);
        current.clear();
        break;
      case SymbolKind::kRule:
        throw Error(ErrorCode::kCorruption, "unexpanded rule reference in stream");
    }
  }
  return files;
}

}  // namespace gtadoc
