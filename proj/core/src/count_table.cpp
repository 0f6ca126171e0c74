// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/count_table.hpp"

#include <bit>
#include <limits>
#include <thread>

#include "gtadoc/error.hpp"

namespace gtadoc {

std::uint64_t entry_count_for(std::uint64_t expected_keys) noexcept {
  if (expected_keys == 0) return 0;
  return std::bit_ceil(expected_keys * 2);
}

std::int32_t CountTableView::find_in_chain(std::uint64_t e, std::uint64_t key) const {
  for (std::int32_t n = b_.entries[e].load(std::memory_order_acquire); n >= 0;
       n = b_.next[n].load(std::memory_order_acquire)) {
    if (b_.keys[n] == key) return n;
  }
  return -1;
}

void CountTableView::add_to_node(std::int32_t n, std::uint64_t delta) {
  const std::uint64_t old = b_.values[n].fetch_add(delta, std::memory_order_relaxed);
  if (old > std::numeric_limits<std::uint64_t>::max() - delta) {
    throw Error(ErrorCode::kOverflow, "count for key " + std::to_string(b_.keys[n]) +
                                          " exceeds 64 bits");
  }
}

InsertStatus CountTableView::try_insert_or_add(std::uint64_t key, std::uint64_t delta) {
  if (b_.entry_count == 0) {
    throw Error(ErrorCode::kCapacity, "count table has no capacity");
  }
  const std::uint64_t e = bucket_of(key);
  if (std::int32_t n = find_in_chain(e, key); n >= 0) {
    add_to_node(n, delta);
    return InsertStatus::kDone;
  }

  std::uint8_t unlocked = 0;
  if (!b_.locks[e].compare_exchange_strong(unlocked, 1, std::memory_order_acquire,
                                           std::memory_order_relaxed)) {
    return InsertStatus::kBusy;
  }
  struct Unlock {
    std::atomic<std::uint8_t>& flag;
    ~Unlock() { flag.store(0, std::memory_order_release); }
  } unlock{b_.locks[e]};

  // The chain may have grown between the lock-free scan and the lock.
  if (std::int32_t n = find_in_chain(e, key); n >= 0) {
    add_to_node(n, delta);
    return InsertStatus::kDone;
  }

  const std::uint32_t slot = b_.cursor->fetch_add(1, std::memory_order_relaxed);
  if (slot >= b_.node_capacity) {
    throw Error(ErrorCode::kCapacity, "count table node capacity " +
                                          std::to_string(b_.node_capacity) + " exhausted");
  }
  const auto node = static_cast<std::int32_t>(slot);
  b_.keys[node] = key;
  b_.values[node].store(delta, std::memory_order_relaxed);
  b_.next[node].store(-1, std::memory_order_relaxed);

  std::int32_t tail = b_.entries[e].load(std::memory_order_relaxed);
  if (tail < 0) {
    b_.entries[e].store(node, std::memory_order_release);
  } else {
    for (std::int32_t n = b_.next[tail].load(std::memory_order_relaxed); n >= 0;
         n = b_.next[tail].load(std::memory_order_relaxed)) {
      tail = n;
    }
    b_.next[tail].store(node, std::memory_order_release);
  }
  return InsertStatus::kDone;
}

void CountTableView::insert_or_add(std::uint64_t key, std::uint64_t delta) {
  for (unsigned spins = 0; try_insert_or_add(key, delta) == InsertStatus::kBusy; ++spins) {
    if (spins > 64) std::this_thread::yield();
  }
}

void CountTableView::merge_scaled(const CountTableView& src, std::uint64_t scale) {
  src.for_each([&](std::uint64_t key, std::uint64_t value) {
    if (scale != 0 && value > std::numeric_limits<std::uint64_t>::max() / scale) {
      throw Error(ErrorCode::kOverflow, "scaled count exceeds 64 bits");
    }
    insert_or_add(key, value * scale);
  });
}

std::optional<std::uint64_t> CountTableView::get(std::uint64_t key) const {
  if (b_.entry_count == 0) return std::nullopt;
  const std::int32_t n = find_in_chain(bucket_of(key), key);
  if (n < 0) return std::nullopt;
  return b_.values[n].load(std::memory_order_relaxed);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> CountTableView::items() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve(size());
  for_each([&](std::uint64_t k, std::uint64_t v) { out.emplace_back(k, v); });
  return out;
}

bool CountTableView::chains_well_formed() const {
  const std::uint32_t used = size();
  std::vector<bool> seen(used, false);
  std::uint32_t visited = 0;
  for (std::uint64_t e = 0; e < b_.entry_count; ++e) {
    for (std::int32_t n = b_.entries[e].load(); n >= 0; n = b_.next[n].load()) {
      if (static_cast<std::uint32_t>(n) >= used || seen[n]) return false;
      if (bucket_of(b_.keys[n]) != e) return false;
      seen[n] = true;
      ++visited;
    }
  }
  return visited == used;
}

ConcurrentCountTable::ConcurrentCountTable(std::uint64_t expected_keys, KeyHasher hasher)
    : ConcurrentCountTable(entry_count_for(expected_keys), expected_keys, hasher) {}

ConcurrentCountTable::ConcurrentCountTable(std::uint64_t entry_count,
                                           std::uint64_t node_capacity, KeyHasher hasher) {
  if (entry_count != 0 && !std::has_single_bit(entry_count)) {
    throw Error(ErrorCode::kUsage, "entry count must be a power of two");
  }
  if (node_capacity > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
    throw Error(ErrorCode::kResource, "count table node capacity too large");
  }
  try {
    locks_ = std::make_unique<std::atomic<std::uint8_t>[]>(entry_count);
    entries_ = std::make_unique<std::atomic<std::int32_t>[]>(entry_count);
    keys_ = std::make_unique<std::uint64_t[]>(node_capacity);
    values_ = std::make_unique<std::atomic<std::uint64_t>[]>(node_capacity);
    next_ = std::make_unique<std::atomic<std::int32_t>[]>(node_capacity);
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::kResource, "cannot allocate count table");
  }
  for (std::uint64_t e = 0; e < entry_count; ++e) entries_[e].store(-1, std::memory_order_relaxed);
  for (std::uint64_t n = 0; n < node_capacity; ++n) next_[n].store(-1, std::memory_order_relaxed);

  CountTableView::Buffers b;
  b.locks = locks_.get();
  b.entries = entries_.get();
  b.keys = keys_.get();
  b.values = values_.get();
  b.next = next_.get();
  b.cursor = &cursor_;
  b.entry_count = entry_count;
  b.node_capacity = node_capacity;
  b.hasher = hasher;
  view_ = CountTableView(b);
}

}  // namespace gtadoc
