// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sparse expansion of a small operator onto a larger register, plus the
// LRU memoization cache for the expansions. The apply path goes through
// build_expansion both with and without the cache, so enabling the cache
// never changes numerical results.

#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "qnetsim/quant/types.hpp"

namespace qnet::quant {

// CSR-style sparse 2^n x 2^n matrix.
struct SparseOp {
  std::uint64_t dim = 0;
  std::vector<std::uint64_t> row_ptr;  // dim + 1 entries
  std::vector<std::uint32_t> col;
  std::vector<cd> val;

  std::size_t bytes() const {
    return row_ptr.size() * sizeof(std::uint64_t) + col.size() * sizeof(std::uint32_t) +
           val.size() * sizeof(cd);
  }
  // out = S * in (out must not alias in).
  void apply_vec(const cd* in, cd* out) const;
  // out = S * in for a dense matrix.
  void apply_left(const Mat& in, Mat& out) const;
};

// Expands a 2^k x 2^k matrix acting on `targets` (qubit 0 = most significant
// bit) of an n-qubit register. Entries with |value| == 0 are dropped.
std::shared_ptr<const SparseOp> build_expansion(const Mat& u, const std::vector<int>& targets,
                                                int n);

class MemoCache {
 public:
  explicit MemoCache(std::size_t capacity_bytes = std::size_t{1} << 30)
      : capacity_(capacity_bytes) {}

  // Returns the cached expansion for (op_key, targets, n), building it on a
  // miss. Least-recently-used entries are evicted to honour the byte cap.
  std::shared_ptr<const SparseOp> get_or_build(const std::string& op_key,
                                               const std::vector<int>& targets, int n,
                                               const Mat& u);

  void set_capacity_bytes(std::size_t cap);
  void clear();
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::size_t size_bytes() const { return bytes_; }

 private:
  struct Entry {
    std::string key;
    std::shared_ptr<const SparseOp> op;
  };
  std::size_t capacity_;
  std::size_t bytes_ = 0;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::list<Entry> lru_;  // front = most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

}  // namespace qnet::quant
