// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "gtadoc/grammar.hpp"
#include "gtadoc/tasks.hpp"

namespace gtadoc {

// Reference path: expand the grammar back to per-file word lists and run the
// task with plain sequential maps.
std::vector<std::vector<SymbolId>> decompress_files(const Grammar& grammar);

TaskOutput naive_run(const std::vector<std::vector<SymbolId>>& files, std::uint32_t num_words,
                     TaskKind kind, std::uint32_t length = 3);
TaskOutput naive_run(const Grammar& grammar, TaskKind kind, std::uint32_t length = 3);

}  // namespace gtadoc
