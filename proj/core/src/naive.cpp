// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/naive.hpp"

#include <map>

#include "gtadoc/error.hpp"

namespace gtadoc {

std::vector<std::vector<SymbolId>> decompress_files(const Grammar& grammar) {
  if (grammar.rules.empty()) return {};
  return split_files(grammar.space(), expand_rule(grammar, Grammar::kRootIndex));
}

namespace {

WordCountList counts_of(const std::vector<SymbolId>& words) {
  std::map<SymbolId, std::uint64_t> m;
  for (SymbolId w : words) ++m[w];
  return {m.begin(), m.end()};
}

SequenceCounts grams_of(const std::vector<std::vector<SymbolId>>& files, std::uint32_t l) {
  SequenceCounts out;
  out.files.resize(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    std::map<Gram, std::uint64_t> m;
    const auto& words = files[f];
    for (std::size_t i = 0; i + l <= words.size(); ++i) {
      ++m[Gram(words.begin() + static_cast<std::ptrdiff_t>(i),
               words.begin() + static_cast<std::ptrdiff_t>(i + l))];
    }
    out.files[f].assign(m.begin(), m.end());
  }
  return out;
}

}  // namespace

TaskOutput naive_run(const std::vector<std::vector<SymbolId>>& files, std::uint32_t num_words,
                     TaskKind kind, std::uint32_t length) {
  switch (kind) {
    case TaskKind::kWordCount:
    case TaskKind::kSort: {
      std::vector<SymbolId> all;
      for (const auto& f : files) all.insert(all.end(), f.begin(), f.end());
      WordCounts wc{counts_of(all)};
      if (kind == TaskKind::kWordCount) return wc;
      return sort_counts(wc);
    }
    case TaskKind::kInvertedIndex: {
      std::vector<std::vector<std::uint32_t>> lists(num_words);
      for (std::uint32_t f = 0; f < files.size(); ++f) {
        for (auto [w, c] : counts_of(files[f])) lists[w].push_back(f);
      }
      InvertedIndex out;
      for (SymbolId w = 0; w < num_words; ++w) {
        if (!lists[w].empty()) out.words.emplace_back(w, std::move(lists[w]));
      }
      return out;
    }
    case TaskKind::kTermVector: {
      TermVectors out;
      for (const auto& f : files) {
        out.files.push_back(counts_of(f));
        rank_word_list(out.files.back());
      }
      return out;
    }
    case TaskKind::kSequenceCount:
    case TaskKind::kRankedInvertedIndex: {
      if (length == 0) throw Error(ErrorCode::kUsage, "sequence length must be at least 1");
      SequenceCounts sc = grams_of(files, length);
      if (kind == TaskKind::kSequenceCount) return sc;
      return transpose(sc);
    }
  }
  throw Error(ErrorCode::kUsage, "unknown task");
}

TaskOutput naive_run(const Grammar& grammar, TaskKind kind, std::uint32_t length) {
  return naive_run(decompress_files(grammar), grammar.dictionary.num_words(), kind, length);
}

}  // namespace gtadoc
