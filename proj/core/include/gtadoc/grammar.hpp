// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gtadoc {

// Words occupy [0, numWords), file splitters [numWords, numWords +
// numSplitters), and rule references start right after. A rule reference
// encodes its rule index, so index 0 (the root) is never a valid symbol.
using SymbolId = std::uint32_t;

enum class SymbolKind { kWord, kSplitter, kRule };

struct SymbolSpace {
  std::uint32_t num_words = 0;
  std::uint32_t num_splitters = 0;

  SymbolId rule_base() const noexcept { return num_words + num_splitters; }

  SymbolKind classify(SymbolId s) const noexcept {
    if (s < num_words) return SymbolKind::kWord;
    if (s < rule_base()) return SymbolKind::kSplitter;
    return SymbolKind::kRule;
  }

  SymbolId splitter(std::uint32_t file) const noexcept { return num_words + file; }
  std::uint32_t file_of(SymbolId splitter) const noexcept { return splitter - num_words; }
  SymbolId rule_symbol(std::uint32_t rule) const noexcept { return rule_base() + rule; }
  std::uint32_t rule_index(SymbolId s) const noexcept { return s - rule_base(); }

  bool operator==(const SymbolSpace&) const = default;
};

class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::vector<std::string> words, std::uint32_t num_splitters = 0);

  // Returns the id of `word`, assigning the next dense id on first sight.
  SymbolId intern(std::string_view word);
  std::optional<SymbolId> find(std::string_view word) const;

  const std::string& word(SymbolId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  std::uint32_t num_words() const noexcept {
    return static_cast<std::uint32_t>(words_.size());
  }
  std::uint32_t num_splitters() const noexcept { return num_splitters_; }
  void set_num_splitters(std::uint32_t n) noexcept { num_splitters_ = n; }

  SymbolSpace space() const noexcept { return {num_words(), num_splitters_}; }

  bool operator==(const Dictionary& other) const {
    return words_ == other.words_ && num_splitters_ == other.num_splitters_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> words_;
  std::unordered_map<std::string, SymbolId, Hash, std::equal_to<>> index_;
  std::uint32_t num_splitters_ = 0;
};

struct Grammar {
  Dictionary dictionary;
  // rules[0] is the root; every other rule is referenced through
  // dictionary.space().rule_symbol(index).
  std::vector<std::vector<SymbolId>> rules;

  static constexpr std::uint32_t kRootIndex = 0;

  SymbolSpace space() const noexcept { return dictionary.space(); }
  std::uint32_t num_rules() const noexcept {
    return static_cast<std::uint32_t>(rules.size());
  }

  bool operator==(const Grammar&) const = default;
};

struct CorpusFile {
  std::string name;
  std::vector<std::string> tokens;
};

struct CorpusStream {
  Dictionary dictionary;
  std::vector<SymbolId> symbols;
};

// Word ids in first-appearance order; one splitter after every file,
// including the last. Throws Error(kUsage) on an empty file list or a
// duplicated file name.
CorpusStream build_corpus_stream(std::span<const CorpusFile> files);

// Fully substitutes rule references until only words and splitters remain.
// Throws Error(kCorruption) for a symbol that names no rule.
std::vector<SymbolId> expand(const Grammar& grammar, SymbolId symbol);
std::vector<SymbolId> expand_rule(const Grammar& grammar, std::uint32_t rule);

// Splits an expanded root into per-file word-id lists using the splitters.
std::vector<std::vector<SymbolId>> split_files(const SymbolSpace& space,
                                               std::span<const SymbolId> stream);

}  // namespace gtadoc
