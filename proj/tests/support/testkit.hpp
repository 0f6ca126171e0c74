// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtadoc/grammar.hpp"

namespace gtadoc::testkit {

struct FuzzSpec {
  std::uint32_t max_files = 64;
  std::uint64_t max_tokens = 100000;
  std::uint32_t max_vocab = 5000;
  double zipf_s = 1.1;
  // Chance that the next chunk copies an earlier span instead of sampling.
  double repeat_p = 0.35;
};

// Zipf-distributed words with repeated spans, cut into files at random
// points. Empty files are possible. Same seed, same corpus.
std::vector<CorpusFile> fuzz_corpus(std::uint64_t seed, const FuzzSpec& spec = {});

std::uint64_t token_count(const std::vector<CorpusFile>& files);

// A = "a b a b c", B = "a b c".
std::vector<CorpusFile> g1_files();
Grammar g1_grammar();

// Grammar laws. Each returns a description of the first violation.
std::optional<std::string> digram_violation(const Grammar& g);
std::optional<std::string> utility_violation(const Grammar& g);

// Hand-built grammar from rule bodies written with word names, "#k" for
// splitter k and "Rk" for rule k. Words are interned in order of appearance.
Grammar make_grammar(const std::vector<std::vector<std::string>>& bodies,
                     std::uint32_t num_splitters);

}  // namespace gtadoc::testkit
