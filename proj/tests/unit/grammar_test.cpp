// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "gtadoc/error.hpp"
#include "gtadoc/grammar.hpp"
#include "gtadoc/sequitur.hpp"
#include "testkit.hpp"

namespace gtadoc {
namespace {

using Ids = std::vector<SymbolId>;

TEST(CorpusStream, G1NumbersWordsByFirstAppearance) {
  const auto files = testkit::g1_files();
  const CorpusStream cs = build_corpus_stream(files);
  EXPECT_EQ(cs.dictionary.words(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(cs.dictionary.num_splitters(), 2u);
  EXPECT_EQ(cs.symbols, (Ids{0, 1, 0, 1, 2, 3, 0, 1, 2, 4}));
}

TEST(CorpusStream, SplitterFollowsEveryFile) {
  const std::vector<CorpusFile> one{{"x", {"x"}}};
  EXPECT_EQ(build_corpus_stream(one).symbols, (Ids{0, 1}));
  const std::vector<CorpusFile> twins{{"p", {"w"}}, {"q", {"w"}}};
  EXPECT_EQ(build_corpus_stream(twins).symbols, (Ids{0, 1, 0, 2}));
}

TEST(CorpusStream, RejectsEmptyAndDuplicateNames) {
  const std::vector<CorpusFile> none;
  EXPECT_THROW(build_corpus_stream(none), Error);
  const std::vector<CorpusFile> dup{{"a", {"x"}}, {"a", {"y"}}};
  try {
    build_corpus_stream(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
}

TEST(Sequitur, G1Shape) {
  const Grammar g = testkit::g1_grammar();
  const SymbolSpace sp = g.space();
  ASSERT_EQ(g.num_rules(), 3u);
  const SymbolId r1 = sp.rule_symbol(1), r2 = sp.rule_symbol(2);
  EXPECT_EQ(g.rules[0], (Ids{r1, r2, sp.splitter(0), r2, sp.splitter(1)}));
  EXPECT_EQ(g.rules[1], (Ids{0, 1}));
  EXPECT_EQ(g.rules[2], (Ids{r1, 2}));
}

TEST(Sequitur, SingleSymbolHasNoRules) {
  const Grammar g = sequitur_infer(Dictionary({"x"}), Ids{0});
  ASSERT_EQ(g.num_rules(), 1u);
  EXPECT_EQ(g.rules[0], (Ids{0}));
}

TEST(Sequitur, RepeatedDigramBecomesOneRule) {
  const Grammar g = sequitur_infer(Dictionary({"x", "y"}), Ids{0, 1, 0, 1});
  ASSERT_EQ(g.num_rules(), 2u);
  const SymbolId r1 = g.space().rule_symbol(1);
  EXPECT_EQ(g.rules[0], (Ids{r1, r1}));
  EXPECT_EQ(g.rules[1], (Ids{0, 1}));
}

TEST(Sequitur, OverlappingRunsStayLegal) {
  for (std::size_t n = 1; n < 40; ++n) {
    const Ids run(n, 0);
    const Grammar g = sequitur_infer(Dictionary({"a"}), run);
    EXPECT_EQ(expand_rule(g, 0), run) << n;
    EXPECT_FALSE(testkit::digram_violation(g)) << n;
    EXPECT_FALSE(testkit::utility_violation(g)) << n;
  }
}

TEST(Sequitur, RejectsRuleSymbolsInInput) {
  SequiturBuilder b(SymbolSpace{2, 0});
  EXPECT_THROW(b.push(5), Error);
}

TEST(Sequitur, FuzzedGrammarsAreLosslessAndLawful) {
  testkit::FuzzSpec spec;
  spec.max_tokens = 5000;
  spec.max_vocab = 50;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto files = testkit::fuzz_corpus(seed, spec);
    const CorpusStream cs = build_corpus_stream(files);
    const Grammar g = sequitur_infer(cs.dictionary, cs.symbols);
    ASSERT_EQ(expand_rule(g, 0), cs.symbols) << "seed " << seed;
    const auto per_file = split_files(g.space(), expand_rule(g, 0));
    ASSERT_EQ(per_file.size(), files.size());
    for (std::size_t f = 0; f < files.size(); ++f) {
      ASSERT_EQ(per_file[f].size(), files[f].tokens.size());
      for (std::size_t i = 0; i < per_file[f].size(); ++i) {
        ASSERT_EQ(g.dictionary.word(per_file[f][i]), files[f].tokens[i]);
      }
    }
    EXPECT_EQ(testkit::digram_violation(g), std::nullopt) << "seed " << seed;
    EXPECT_EQ(testkit::utility_violation(g), std::nullopt) << "seed " << seed;
    EXPECT_EQ(compress_corpus(files), g) << "not deterministic, seed " << seed;
  }
}

TEST(Expand, SubstitutesRecursively) {
  const Grammar g = testkit::g1_grammar();
  EXPECT_EQ(expand(g, g.space().rule_symbol(2)), (Ids{0, 1, 2}));
  EXPECT_EQ(expand(g, 1), (Ids{1}));
  EXPECT_EQ(expand_rule(g, 0), (Ids{0, 1, 0, 1, 2, 3, 0, 1, 2, 4}));
}

TEST(Expand, UnknownRuleIsCorruption) {
  const Grammar g = testkit::g1_grammar();
  try {
    expand(g, g.space().rule_symbol(9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruption);
  }
}

TEST(Expand, CycleIsCorruption) {
  Grammar g = testkit::make_grammar({{"R1", "#0"}, {"x", "R2"}, {"R1", "y"}}, 1);
  EXPECT_THROW(expand_rule(g, 0), Error);
}

}  // namespace
}  // namespace gtadoc
