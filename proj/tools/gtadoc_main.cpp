// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> workers;
  if (const char* env = std::getenv("GTADOC_WORKERS")) workers = env;
  return gtadoc::cli::run(args, std::cout, std::cerr, workers);
}
