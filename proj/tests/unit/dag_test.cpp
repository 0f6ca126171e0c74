// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "gtadoc/dag.hpp"
#include "gtadoc/error.hpp"
#include "gtadoc/sequitur.hpp"
#include "testkit.hpp"

namespace gtadoc {
namespace {

using Edges = std::vector<RuleFreq>;

TEST(Dag, G1Shape) {
  const Dag dag = build_dag(testkit::g1_grammar());
  ASSERT_EQ(dag.num_rules(), 3u);
  EXPECT_EQ(dag.root().sub_rules, (Edges{{1, 1}, {2, 2}}));
  EXPECT_EQ(dag.rules[2].sub_rules, (Edges{{1, 1}}));
  EXPECT_EQ(dag.rules[1].parent_ids, (std::vector<std::uint32_t>{0, 2}));
  EXPECT_EQ(dag.rules[1].num_in_edge, 1u);
  EXPECT_EQ(dag.rules[2].num_in_edge, 0u);
  EXPECT_EQ(dag.rules[1].num_out_edge, 0u);
  EXPECT_EQ(dag.rules[2].num_out_edge, 1u);
  EXPECT_EQ(dag.depth, 2u);
  EXPECT_EQ(dag.rules[1].exp_len, 2u);
  EXPECT_EQ(dag.rules[2].exp_len, 3u);
  EXPECT_EQ(dag.segments, (std::vector<Segment>{{0, 2}, {3, 4}}));
  EXPECT_EQ(dag.segment_rules[0], (Edges{{1, 1}, {2, 1}}));
  EXPECT_EQ(dag.segment_rules[1], (Edges{{2, 1}}));
  EXPECT_EQ(dag.total_elements, 5u + 2u + 2u);
}

TEST(Dag, RootOnly) {
  const Dag dag = build_dag(testkit::make_grammar({{"x", "y", "x", "#0"}}, 1));
  EXPECT_EQ(dag.depth, 0u);
  EXPECT_TRUE(dag.root().sub_rules.empty());
  ASSERT_EQ(dag.num_files(), 1u);
  EXPECT_EQ(dag.segments[0], (Segment{0, 3}));
}

TEST(Dag, ChainCountsParallelEdges) {
  const Dag dag = build_dag(testkit::make_grammar({{"R1", "#0"}, {"R2", "R2"}, {"w"}}, 1));
  EXPECT_EQ(dag.rules[2].num_in_edge, 2u);
  EXPECT_EQ(dag.rules[1].num_out_edge, 1u);
  EXPECT_EQ(dag.rules[1].exp_len, 2u);
  EXPECT_EQ(dag.depth, 2u);
}

TEST(Dag, CorruptGrammars) {
  auto code_of = [](const Grammar& g) {
    try {
      build_dag(g);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  // cycle
  EXPECT_EQ(code_of(testkit::make_grammar({{"R1", "#0"}, {"R2"}, {"R1"}}, 1)),
            ErrorCode::kCorruption);
  // unreachable rule
  EXPECT_EQ(code_of(testkit::make_grammar({{"x", "#0"}, {"y"}}, 1)), ErrorCode::kCorruption);
  // splitter outside the root
  EXPECT_EQ(code_of(testkit::make_grammar({{"R1", "#0"}, {"y", "#0"}}, 1)),
            ErrorCode::kCorruption);
  // unknown rule
  EXPECT_EQ(code_of(testkit::make_grammar({{"R4", "#0"}}, 1)), ErrorCode::kCorruption);
}

TEST(Dag, InEdgeIdentityOnFuzzedGrammars) {
  testkit::FuzzSpec spec;
  spec.max_tokens = 4000;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Grammar g = compress_corpus(testkit::fuzz_corpus(seed, spec));
    const Dag dag = build_dag(g);
    std::uint64_t in = 0, out = 0;
    for (std::uint32_t r = 1; r < dag.num_rules(); ++r) {
      in += dag.rules[r].num_in_edge;
      for (const RuleFreq& e : dag.rules[r].sub_rules) out += e.freq;
    }
    EXPECT_EQ(in, out) << seed;
    for (std::uint32_t r = 0; r < dag.num_rules(); ++r) {
      EXPECT_EQ(dag.rules[r].exp_len, r == 0 ? dag.rules[r].exp_len
                                             : expand_rule(g, r).size());
    }
    std::uint64_t covered = 0;
    for (const Segment& s : dag.segments) covered += s.end - s.begin;
    EXPECT_EQ(covered + dag.num_files(), dag.root().body.size());
  }
}

}  // namespace
}  // namespace gtadoc
