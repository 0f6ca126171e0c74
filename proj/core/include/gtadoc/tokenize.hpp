// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gtadoc {

struct TokenizeConfig {
  enum class Mode { kWhitespace };
  Mode mode = Mode::kWhitespace;
};

// Offset of the first byte that breaks UTF-8 well-formedness, if any.
// Overlong encodings, surrogates and code points above U+10FFFF are rejected.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept;

// Splits `bytes` on ASCII whitespace; punctuation stays inside tokens.
// Throws Error(kIngestion) naming `source` and the byte offset on invalid UTF-8.
std::vector<std::string> tokenize(std::string_view bytes,
                                  const TokenizeConfig& cfg = {},
                                  std::string_view source = "<input>");

}  // namespace gtadoc
