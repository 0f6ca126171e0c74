// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gtadoc/count_table.hpp"

namespace gtadoc {

// One arena holding the buffers of many count tables. Sizes come from a
// completed bounds pass; every slot gets a disjoint range sized by the table
// geometry (entries = next power of two >= 2 * bound, nodes = bound) and the
// arena never grows afterwards.
class MemoryPool {
 public:
  struct Range {
    std::uint64_t entry_offset = 0;
    std::uint64_t entry_count = 0;
    std::uint64_t node_offset = 0;
    std::uint64_t node_count = 0;
  };

  MemoryPool() = default;
  // Throws Error(kResource) when the arena cannot be allocated.
  explicit MemoryPool(std::span<const std::uint64_t> bounds, KeyHasher hasher = default_hasher);

  MemoryPool(MemoryPool&&) noexcept = default;
  MemoryPool& operator=(MemoryPool&&) noexcept = default;

  std::size_t slots() const noexcept { return ranges_.size(); }
  const Range& range(std::size_t slot) const { return ranges_.at(slot); }
  CountTableView table(std::size_t slot) const;

  std::uint64_t entry_capacity() const noexcept { return entry_capacity_; }
  std::uint64_t node_capacity() const noexcept { return node_capacity_; }
  // One past the highest node in use across all slots.
  std::uint64_t high_water() const noexcept;

 private:
  std::vector<Range> ranges_;
  std::uint64_t entry_capacity_ = 0;
  std::uint64_t node_capacity_ = 0;
  KeyHasher hasher_ = default_hasher;
  std::unique_ptr<std::atomic<std::uint8_t>[]> locks_;
  std::unique_ptr<std::atomic<std::int32_t>[]> entries_;
  std::unique_ptr<std::uint64_t[]> keys_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> values_;
  std::unique_ptr<std::atomic<std::int32_t>[]> next_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> cursors_;
};

}  // namespace gtadoc
