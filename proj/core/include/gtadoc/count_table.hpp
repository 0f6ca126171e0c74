// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace gtadoc {

using KeyHasher = std::uint64_t (*)(std::uint64_t) noexcept;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t default_hasher(std::uint64_t key) noexcept { return mix64(key); }

// Smallest power of two >= 2 * expected_keys, or 0 when no keys are expected.
std::uint64_t entry_count_for(std::uint64_t expected_keys) noexcept;

enum class InsertStatus { kDone, kBusy };

// Non-owning handle over the lock/entry/key/value/next buffers of one
// chained count table. Nodes are claimed from a shared cursor; a new node is
// linked at the tail of its bucket chain while the bucket's entry lock is
// held. Adds to an existing key never take the lock.
//
// Writers may run concurrently; get/for_each/items need a quiescent table.
class CountTableView {
 public:
  struct Buffers {
    std::atomic<std::uint8_t>* locks = nullptr;
    std::atomic<std::int32_t>* entries = nullptr;
    std::uint64_t* keys = nullptr;
    std::atomic<std::uint64_t>* values = nullptr;
    std::atomic<std::int32_t>* next = nullptr;
    std::atomic<std::uint32_t>* cursor = nullptr;
    std::uint64_t entry_count = 0;  // power of two or 0
    std::uint64_t node_capacity = 0;
    KeyHasher hasher = default_hasher;
  };

  CountTableView() = default;
  explicit CountTableView(const Buffers& b) : b_(b) {}

  // One pass of the insertion protocol. Returns kBusy when a new node is
  // needed but another writer holds the entry lock; the caller retries later.
  // Throws Error(kCapacity) when no node is left and Error(kOverflow) when a
  // count would exceed 64 bits.
  InsertStatus try_insert_or_add(std::uint64_t key, std::uint64_t delta);

  // Retries try_insert_or_add until it lands.
  void insert_or_add(std::uint64_t key, std::uint64_t delta);

  // Adds scale * value for every entry of `src`.
  void merge_scaled(const CountTableView& src, std::uint64_t scale);

  std::optional<std::uint64_t> get(std::uint64_t key) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    const std::uint32_t used = size();
    for (std::uint32_t n = 0; n < used; ++n) {
      fn(b_.keys[n], b_.values[n].load(std::memory_order_relaxed));
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> items() const;

  std::uint32_t size() const noexcept {
    if (b_.cursor == nullptr) return 0;
    const std::uint64_t c = b_.cursor->load(std::memory_order_acquire);
    return static_cast<std::uint32_t>(c < b_.node_capacity ? c : b_.node_capacity);
  }
  std::uint64_t entry_count() const noexcept { return b_.entry_count; }
  std::uint64_t node_capacity() const noexcept { return b_.node_capacity; }
  std::uint64_t bucket_of(std::uint64_t key) const noexcept {
    return b_.hasher(key) & (b_.entry_count - 1);
  }

  // Raw buffer inspection (quiescent tables only).
  std::int32_t entry(std::uint64_t e) const { return b_.entries[e].load(); }
  std::uint8_t lock_flag(std::uint64_t e) const { return b_.locks[e].load(); }
  std::uint64_t node_key(std::int32_t n) const { return b_.keys[n]; }
  std::uint64_t node_value(std::int32_t n) const { return b_.values[n].load(); }
  std::int32_t node_next(std::int32_t n) const { return b_.next[n].load(); }

  // Every chain terminates and no node is reachable twice.
  bool chains_well_formed() const;

 private:
  std::int32_t find_in_chain(std::uint64_t e, std::uint64_t key) const;
  void add_to_node(std::int32_t n, std::uint64_t delta);

  Buffers b_;
};

// Heap-owned table for results that live outside a memory pool.
class ConcurrentCountTable {
 public:
  explicit ConcurrentCountTable(std::uint64_t expected_keys, KeyHasher hasher = default_hasher);
  ConcurrentCountTable(std::uint64_t entry_count, std::uint64_t node_capacity,
                       KeyHasher hasher);

  CountTableView& view() noexcept { return view_; }
  const CountTableView& view() const noexcept { return view_; }

  InsertStatus try_insert_or_add(std::uint64_t key, std::uint64_t delta) {
    return view_.try_insert_or_add(key, delta);
  }
  void insert_or_add(std::uint64_t key, std::uint64_t delta) { view_.insert_or_add(key, delta); }
  std::optional<std::uint64_t> get(std::uint64_t key) const { return view_.get(key); }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> items() const { return view_.items(); }
  std::uint32_t size() const noexcept { return view_.size(); }

 private:
  std::unique_ptr<std::atomic<std::uint8_t>[]> locks_;
  std::unique_ptr<std::atomic<std::int32_t>[]> entries_;
  std::unique_ptr<std::uint64_t[]> keys_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> values_;
  std::unique_ptr<std::atomic<std::int32_t>[]> next_;
  std::atomic<std::uint32_t> cursor_{0};
  CountTableView view_;
};

}  // namespace gtadoc
