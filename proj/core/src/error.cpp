// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/error.hpp"

namespace gtadoc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kUsage: return "usage error";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kIngestion: return "ingestion error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kCorruption: return "corruption error";
    case ErrorCode::kCapacity: return "capacity error";
    case ErrorCode::kResource: return "resource error";
    case ErrorCode::kOverflow: return "overflow error";
    case ErrorCode::kDivergence: return "divergence";
  }
  return "error";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kUsage: return 1;
    case ErrorCode::kIo:
    case ErrorCode::kIngestion:
    case ErrorCode::kResource: return 2;
    case ErrorCode::kFormat:
    case ErrorCode::kCorruption:
    case ErrorCode::kCapacity:
    case ErrorCode::kOverflow: return 3;
    case ErrorCode::kDivergence: return 4;
  }
  return 1;
}

const char* to_string(FormatIssue issue) noexcept {
  switch (issue) {
    case FormatIssue::kBadMagic: return "bad magic";
    case FormatIssue::kBadVersion: return "unsupported version";
    case FormatIssue::kTruncated: return "truncated section";
    case FormatIssue::kSymbolOutOfRange: return "symbol out of range";
    case FormatIssue::kSplitterPlacement: return "misplaced file splitter";
    case FormatIssue::kTrailingBytes: return "trailing bytes";
  }
  return "format error";
}

}  // namespace gtadoc
