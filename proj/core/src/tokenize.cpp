// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/tokenize.hpp"

#include <cstdint>

#include "gtadoc/error.hpp"

namespace gtadoc {
namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min_cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2, cp = c & 0x1F, min_cp = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3, cp = c & 0x0F, min_cp = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4, cp = c & 0x07, min_cp = 0x10000;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if (!is_continuation(p[i + k])) return i;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

std::vector<std::string> tokenize(std::string_view bytes, const TokenizeConfig& cfg,
                                  std::string_view source) {
  (void)cfg;  // whitespace splitting is the only mode
  if (auto bad = find_invalid_utf8(bytes)) {
    throw Error(ErrorCode::kIngestion, "invalid UTF-8 in " + std::string(source) +
                                           " at byte offset " + std::to_string(*bad));
  }
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(bytes[i]))) ++i;
    const std::size_t start = i;
    while (i < n && !is_space(static_cast<unsigned char>(bytes[i]))) ++i;
    if (i > start) tokens.emplace_back(bytes.substr(start, i - start));
  }
  return tokens;
}

}  // namespace gtadoc
