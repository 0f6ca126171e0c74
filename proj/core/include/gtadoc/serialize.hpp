// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gtadoc/grammar.hpp"

namespace gtadoc {

// GTDC container, little-endian:
//   "GTDC" u8 version=1 u32 numWords u32 numSplitters u32 numRules
//   numWords x (u32 byteLen, UTF-8 bytes)
//   numRules x (u32 bodyLen, bodyLen x u32 symbol), root first
inline constexpr std::uint8_t kGtdcVersion = 1;

std::vector<std::uint8_t> serialize_grammar(const Grammar& grammar);

// Throws FormatError with a distinct FormatIssue for bad magic, bad version,
// truncation, out-of-range symbols, misplaced splitters and trailing bytes.
Grammar deserialize_grammar(std::span<const std::uint8_t> bytes);

void write_grammar_file(const std::filesystem::path& path, const Grammar& grammar);
Grammar read_grammar_file(const std::filesystem::path& path);

}  // namespace gtadoc
