// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/memory_pool.hpp"

#include <algorithm>
#include <limits>

#include "gtadoc/error.hpp"

namespace gtadoc {

MemoryPool::MemoryPool(std::span<const std::uint64_t> bounds, KeyHasher hasher)
    : hasher_(hasher) {
  ranges_.reserve(bounds.size());
  for (std::uint64_t bound : bounds) {
    if (bound > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
      throw Error(ErrorCode::kResource, "table bound " + std::to_string(bound) + " too large");
    }
    Range r;
    r.entry_offset = entry_capacity_;
    r.entry_count = entry_count_for(bound);
    r.node_offset = node_capacity_;
    r.node_count = bound;
    entry_capacity_ += r.entry_count;
    node_capacity_ += r.node_count;
    ranges_.push_back(r);
  }

  try {
    locks_ = std::make_unique<std::atomic<std::uint8_t>[]>(entry_capacity_);
    entries_ = std::make_unique<std::atomic<std::int32_t>[]>(entry_capacity_);
    keys_ = std::make_unique<std::uint64_t[]>(node_capacity_);
    values_ = std::make_unique<std::atomic<std::uint64_t>[]>(node_capacity_);
    next_ = std::make_unique<std::atomic<std::int32_t>[]>(node_capacity_);
    cursors_ = std::make_unique<std::atomic<std::uint32_t>[]>(ranges_.size());
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::kResource, "cannot allocate memory pool of " +
                                          std::to_string(node_capacity_) + " nodes");
  }
  for (std::uint64_t e = 0; e < entry_capacity_; ++e) {
    entries_[e].store(-1, std::memory_order_relaxed);
  }
  for (std::uint64_t n = 0; n < node_capacity_; ++n) next_[n].store(-1, std::memory_order_relaxed);
}

CountTableView MemoryPool::table(std::size_t slot) const {
  const Range& r = ranges_.at(slot);
  CountTableView::Buffers b;
  b.locks = locks_.get() + r.entry_offset;
  b.entries = entries_.get() + r.entry_offset;
  b.keys = keys_.get() + r.node_offset;
  b.values = values_.get() + r.node_offset;
  b.next = next_.get() + r.node_offset;
  b.cursor = cursors_.get() + slot;
  b.entry_count = r.entry_count;
  b.node_capacity = r.node_count;
  b.hasher = hasher_;
  return CountTableView(b);
}

std::uint64_t MemoryPool::high_water() const noexcept {
  std::uint64_t hw = 0;
  for (std::size_t s = 0; s < ranges_.size(); ++s) {
    const std::uint64_t used =
        std::min<std::uint64_t>(cursors_[s].load(std::memory_order_relaxed), ranges_[s].node_count);
    if (used > 0) hw = std::max(hw, ranges_[s].node_offset + used);
  }
  return hw;
}

}  // namespace gtadoc
