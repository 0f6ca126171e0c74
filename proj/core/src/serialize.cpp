// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/serialize.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "gtadoc/error.hpp"
#include "gtadoc/tokenize.hpp"

namespace gtadoc {
namespace {

constexpr char kMagic[4] = {'G', 'T', 'D', 'C'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw FormatError(FormatIssue::kTruncated, what);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::uint8_t u8(const char* what) { return take(1, what)[0]; }

  std::uint32_t u32(const char* what) {
    auto s = take(4, what);
    return std::uint32_t{s[0]} | std::uint32_t{s[1]} << 8 | std::uint32_t{s[2]} << 16 |
           std::uint32_t{s[3]} << 24;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_grammar(const Grammar& g) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kGtdcVersion);
  put_u32(out, g.dictionary.num_words());
  put_u32(out, g.dictionary.num_splitters());
  put_u32(out, g.num_rules());
  for (const auto& w : g.dictionary.words()) {
    put_u32(out, static_cast<std::uint32_t>(w.size()));
    out.insert(out.end(), w.begin(), w.end());
  }
  for (const auto& body : g.rules) {
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    for (SymbolId s : body) put_u32(out, s);
  }
  return out;
}

Grammar deserialize_grammar(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(FormatIssue::kBadMagic, "");
  }
  Reader in(bytes.subspan(sizeof(kMagic)));
  if (const auto v = in.u8("header"); v != kGtdcVersion) {
    throw FormatError(FormatIssue::kBadVersion, "version " + std::to_string(v));
  }
  const std::uint32_t num_words = in.u32("header");
  const std::uint32_t num_splitters = in.u32("header");
  const std::uint32_t num_rules = in.u32("header");
  if (num_rules == 0) throw FormatError(FormatIssue::kTruncated, "grammar has no root");

  std::vector<std::string> words;
  words.reserve(std::min<std::size_t>(num_words, in.remaining() / 4));
  for (std::uint32_t i = 0; i < num_words; ++i) {
    const std::uint32_t len = in.u32("dictionary");
    auto raw = in.take(len, "dictionary");
    words.emplace_back(reinterpret_cast<const char*>(raw.data()), raw.size());
    if (find_invalid_utf8(words.back())) {
      throw FormatError(FormatIssue::kSymbolOutOfRange, "dictionary word is not UTF-8");
    }
  }

  Grammar g;
  g.dictionary = Dictionary(std::move(words), num_splitters);
  const SymbolSpace space = g.space();
  const std::uint64_t limit = std::uint64_t{space.rule_base()} + num_rules;

  g.rules.resize(num_rules);
  std::uint32_t next_splitter = 0;
  for (std::uint32_t r = 0; r < num_rules; ++r) {
    const std::uint32_t len = in.u32("rules");
    if (in.remaining() / 4 < len) throw FormatError(FormatIssue::kTruncated, "rules");
    auto& body = g.rules[r];
    body.reserve(len);
    for (std::uint32_t i = 0; i < len; ++i) {
      const SymbolId s = in.u32("rules");
      if (s >= limit || s == space.rule_symbol(Grammar::kRootIndex)) {
        throw FormatError(FormatIssue::kSymbolOutOfRange,
                          "symbol " + std::to_string(s) + " in rule " + std::to_string(r));
      }
      if (space.classify(s) == SymbolKind::kSplitter) {
        if (r != Grammar::kRootIndex || space.file_of(s) != next_splitter) {
          throw FormatError(FormatIssue::kSplitterPlacement,
                            "splitter " + std::to_string(s) + " in rule " + std::to_string(r));
        }
        ++next_splitter;
      }
      body.push_back(s);
    }
  }
  if (next_splitter != num_splitters ||
      (num_splitters > 0 &&
       (g.rules[0].empty() || g.rules[0].back() != space.splitter(num_splitters - 1)))) {
    throw FormatError(FormatIssue::kSplitterPlacement, "root does not end every file");
  }
  if (in.remaining() != 0) {
    throw FormatError(FormatIssue::kTrailingBytes, std::to_string(in.remaining()) + " bytes");
  }
  return g;
}

void write_grammar_file(const std::filesystem::path& path, const Grammar& grammar) {
  const auto bytes = serialize_grammar(grammar);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Grammar read_grammar_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_grammar(bytes);
}

}  // namespace gtadoc
