// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gtadoc/grammar.hpp"

namespace gtadoc::cli {

// `args` excludes the program name. `env_workers` is GTADOC_WORKERS when set.
// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_workers);

// Regular files of `dir` in lexicographic name order, tokenized.
std::vector<CorpusFile> read_corpus_dir(const std::filesystem::path& dir);

// Positive worker count; throws Error(kUsage) otherwise.
unsigned parse_workers(std::string_view text);

}  // namespace gtadoc::cli
