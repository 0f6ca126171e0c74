// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/executor.hpp"

#include <algorithm>

namespace gtadoc {

RoundExecutor::RoundExecutor(unsigned workers) : workers_(std::max(1u, workers)) {
  threads_.reserve(workers_ - 1);
  for (unsigned i = 1; i < workers_; ++i) threads_.emplace_back([this] { worker_loop(); });
}

RoundExecutor::~RoundExecutor() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void RoundExecutor::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (threads_.empty() || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  {
    std::lock_guard lock(mu_);
    job_ = &fn;
    job_size_ = n;
    grain_ = std::max<std::size_t>(1, n / (std::size_t{workers_} * 8));
    next_index_.store(0, std::memory_order_relaxed);
    error_ = nullptr;
    busy_ = static_cast<unsigned>(threads_.size());
    ++generation_;
  }
  start_cv_.notify_all();
  drain();
  {
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [&] { return busy_ == 0; });
    job_ = nullptr;
  }
  if (error_) std::rethrow_exception(error_);
}

void RoundExecutor::drain() {
  for (;;) {
    const std::size_t begin = next_index_.fetch_add(grain_, std::memory_order_relaxed);
    if (begin >= job_size_) return;
    const std::size_t end = std::min(job_size_, begin + grain_);
    for (std::size_t i = begin; i < end; ++i) {
      try {
        (*job_)(i);
      } catch (...) {
        std::lock_guard lock(error_mu_);
        if (!error_) error_ = std::current_exception();
        next_index_.store(job_size_, std::memory_order_relaxed);
        return;
      }
    }
  }
}

void RoundExecutor::worker_loop() {
  std::uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mu_);
      start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
    }
    drain();
    {
      std::lock_guard lock(mu_);
      if (--busy_ == 0) done_cv_.notify_one();
    }
  }
}

}  // namespace gtadoc
