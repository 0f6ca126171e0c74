// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "testkit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include "gtadoc/sequitur.hpp"

namespace gtadoc::testkit {

std::vector<CorpusFile> fuzz_corpus(std::uint64_t seed, const FuzzSpec& spec) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  const auto files = static_cast<std::uint32_t>(uniform(1, spec.max_files));
  const auto vocab = static_cast<std::uint32_t>(uniform(1, spec.max_vocab));
  // log-uniform so that tiny corpora show up as often as big ones
  const double scale = std::uniform_real_distribution<double>(
      0.0, std::log(static_cast<double>(spec.max_tokens) + 1))(rng);
  const auto total = std::min<std::uint64_t>(
      spec.max_tokens, static_cast<std::uint64_t>(std::exp(scale)) - 1 + uniform(0, 3));

  std::vector<double> weights(vocab);
  for (std::uint32_t k = 0; k < vocab; ++k) weights[k] = 1.0 / std::pow(k + 1.0, spec.zipf_s);
  std::discrete_distribution<std::uint32_t> zipf(weights.begin(), weights.end());
  std::bernoulli_distribution repeat(spec.repeat_p);

  std::vector<std::uint32_t> stream;
  stream.reserve(total);
  while (stream.size() < total) {
    if (stream.size() > 8 && repeat(rng)) {
      const std::uint64_t len = std::min<std::uint64_t>(uniform(2, 64), stream.size() / 2);
      const std::uint64_t from = uniform(0, stream.size() - len);
      for (std::uint64_t i = 0; i < len && stream.size() < total; ++i) {
        stream.push_back(stream[from + i]);
      }
    } else {
      stream.push_back(zipf(rng));
    }
  }

  std::vector<std::uint64_t> cuts;
  for (std::uint32_t f = 1; f < files; ++f) cuts.push_back(uniform(0, total));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(total);

  auto spelled = [](std::uint32_t id) {
    // a slice of the vocabulary is non-ASCII to keep UTF-8 paths honest
    return (id % 7 == 3 ? std::string("\xC3\xBC") : std::string("w")) + std::to_string(id);
  };
  std::vector<CorpusFile> out(files);
  std::uint64_t begin = 0;
  for (std::uint32_t f = 0; f < files; ++f) {
    char name[32];
    std::snprintf(name, sizeof name, "f%03u.txt", f);
    out[f].name = name;
    for (std::uint64_t i = begin; i < cuts[f]; ++i) out[f].tokens.push_back(spelled(stream[i]));
    begin = cuts[f];
  }
  return out;
}

std::uint64_t token_count(const std::vector<CorpusFile>& files) {
  std::uint64_t n = 0;
  for (const auto& f : files) n += f.tokens.size();
  return n;
}

std::vector<CorpusFile> g1_files() {
  return {{"A.txt", {"a", "b", "a", "b", "c"}}, {"B.txt", {"a", "b", "c"}}};
}

Grammar g1_grammar() {
  const auto files = g1_files();
  return compress_corpus(files);
}

std::optional<std::string> digram_violation(const Grammar& g) {
  std::map<std::pair<SymbolId, SymbolId>, std::pair<std::uint32_t, std::size_t>> seen;
  for (std::uint32_t r = 0; r < g.num_rules(); ++r) {
    const auto& body = g.rules[r];
    for (std::size_t i = 0; i + 1 < body.size(); ++i) {
      const auto key = std::make_pair(body[i], body[i + 1]);
      auto [it, fresh] = seen.try_emplace(key, r, i);
      if (fresh) continue;
      const bool overlapping = it->second.first == r && it->second.second + 1 == i;
      if (!overlapping) {
        return "digram (" + std::to_string(key.first) + "," + std::to_string(key.second) +
               ") repeats in rules " + std::to_string(it->second.first) + " and " +
               std::to_string(r);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> utility_violation(const Grammar& g) {
  const SymbolSpace space = g.space();
  std::vector<std::uint64_t> uses(g.num_rules(), 0);
  for (const auto& body : g.rules) {
    for (SymbolId s : body) {
      if (space.classify(s) == SymbolKind::kRule) ++uses[space.rule_index(s)];
    }
  }
  for (std::uint32_t r = 1; r < g.num_rules(); ++r) {
    if (uses[r] < 2) {
      return "rule " + std::to_string(r) + " used " + std::to_string(uses[r]) + " time(s)";
    }
  }
  return std::nullopt;
}

Grammar make_grammar(const std::vector<std::vector<std::string>>& bodies,
                     std::uint32_t num_splitters) {
  std::vector<std::string> words;
  for (const auto& body : bodies) {
    for (const auto& s : body) {
      const bool special = s.size() > 1 && (s[0] == '#' || (s[0] == 'R' && std::isdigit(
                                                                 static_cast<unsigned char>(s[1]))));
      if (!special && std::find(words.begin(), words.end(), s) == words.end()) words.push_back(s);
    }
  }
  Grammar g{Dictionary(words, num_splitters), {}};
  const SymbolSpace space = g.space();
  for (const auto& body : bodies) {
    std::vector<SymbolId> out;
    for (const auto& s : body) {
      if (s.size() > 1 && s[0] == '#') {
        out.push_back(space.splitter(static_cast<std::uint32_t>(std::stoul(s.substr(1)))));
      } else if (s.size() > 1 && s[0] == 'R' && std::isdigit(static_cast<unsigned char>(s[1]))) {
        out.push_back(space.rule_symbol(static_cast<std::uint32_t>(std::stoul(s.substr(1)))));
      } else {
        out.push_back(*g.dictionary.find(s));
      }
    }
    g.rules.push_back(std::move(out));
  }
  return g;
}

}  // namespace gtadoc::testkit
