// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gtadoc {

enum class ErrorCode {
  kUsage,
  kIo,
  kIngestion,
  kFormat,
  kCorruption,
  kCapacity,
  kResource,
  kOverflow,
  kDivergence,
};

const char* to_string(ErrorCode code) noexcept;

// Process exit status for an error category: 1 usage, 2 I/O, 3 format,
// 4 divergence. Ingestion/resource failures report as I/O, structural
// failures (corruption, capacity, overflow) as format.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class FormatIssue {
  kBadMagic,
  kBadVersion,
  kTruncated,
  kSymbolOutOfRange,
  kSplitterPlacement,
  kTrailingBytes,
};

const char* to_string(FormatIssue issue) noexcept;

class FormatError : public Error {
 public:
  FormatError(FormatIssue issue, const std::string& detail)
      : Error(ErrorCode::kFormat,
              std::string(to_string(issue)) + (detail.empty() ? "" : ": " + detail)),
        issue_(issue) {}

  FormatIssue issue() const noexcept { return issue_; }

 private:
  FormatIssue issue_;
};

}  // namespace gtadoc
