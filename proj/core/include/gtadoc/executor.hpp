// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gtadoc {

// Persistent worker team for bulk-synchronous rounds. parallel_for returns
// only after every index ran, which is the barrier between rounds: all writes
// made inside the round are visible to the caller and to the next round.
class RoundExecutor {
 public:
  explicit RoundExecutor(unsigned workers);
  ~RoundExecutor();

  RoundExecutor(const RoundExecutor&) = delete;
  RoundExecutor& operator=(const RoundExecutor&) = delete;

  unsigned workers() const noexcept { return workers_; }

  // Runs fn(i) for every i in [0, n). The first exception thrown by any call
  // is rethrown here once the round has drained.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();
  void drain();

  unsigned workers_;
  std::vector<std::thread> threads_;

  std::mutex mu_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  unsigned busy_ = 0;
  bool stopping_ = false;

  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t job_size_ = 0;
  std::size_t grain_ = 1;
  std::atomic<std::size_t> next_index_{0};
  std::exception_ptr error_;
  std::mutex error_mu_;
};

}  // namespace gtadoc
