// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/quant/sparse.hpp"

#include <algorithm>

namespace qnet::quant {

void SparseOp::apply_vec(const cd* in, cd* out) const {
  for (std::uint64_t r = 0; r < dim; ++r) {
    cd acc = 0;
    for (std::uint64_t e = row_ptr[r]; e < row_ptr[r + 1]; ++e) acc += val[e] * in[col[e]];
    out[r] = acc;
  }
}

void SparseOp::apply_left(const Mat& in, Mat& out) const {
  out.setZero(in.rows(), in.cols());
  for (std::uint64_t r = 0; r < dim; ++r) {
    for (std::uint64_t e = row_ptr[r]; e < row_ptr[r + 1]; ++e) {
      out.row(r) += val[e] * in.row(col[e]);
    }
  }
}

std::shared_ptr<const SparseOp> build_expansion(const Mat& u, const std::vector<int>& targets,
                                                int n) {
  const int k = static_cast<int>(targets.size());
  const std::uint64_t dim = std::uint64_t{1} << n;
  const int kdim = 1 << k;

  // Bit of target t within a register index (qubit 0 = most significant).
  std::vector<int> shift(k);
  std::uint64_t tmask = 0;
  for (int t = 0; t < k; ++t) {
    shift[t] = n - 1 - targets[t];
    tmask |= std::uint64_t{1} << shift[t];
  }
  // scatter[j]: register bits for small-matrix index j at the target slots.
  std::vector<std::uint64_t> scatter(kdim, 0);
  for (int j = 0; j < kdim; ++j)
    for (int t = 0; t < k; ++t)
      if ((j >> (k - 1 - t)) & 1) scatter[j] |= std::uint64_t{1} << shift[t];

  // Sparsity pattern of u per row.
  std::vector<std::vector<std::pair<int, cd>>> urows(kdim);
  std::vector<std::uint64_t> urow_nnz(kdim, 0);
  for (int i = 0; i < kdim; ++i) {
    for (int j = 0; j < kdim; ++j) {
      if (u(i, j) != cd(0, 0)) urows[i].emplace_back(j, u(i, j));
    }
    urow_nnz[i] = urows[i].size();
  }

  auto op = std::make_shared<SparseOp>();
  op->dim = dim;
  op->row_ptr.resize(dim + 1);
  op->row_ptr[0] = 0;
  for (std::uint64_t r = 0; r < dim; ++r) {
    int i = 0;
    for (int t = 0; t < k; ++t) i |= static_cast<int>((r >> shift[t]) & 1) << (k - 1 - t);
    op->row_ptr[r + 1] = op->row_ptr[r] + urow_nnz[i];
  }
  const std::uint64_t nnz = op->row_ptr[dim];
  op->col.resize(nnz);
  op->val.resize(nnz);
  for (std::uint64_t r = 0; r < dim; ++r) {
    int i = 0;
    for (int t = 0; t < k; ++t) i |= static_cast<int>((r >> shift[t]) & 1) << (k - 1 - t);
    std::uint64_t e = op->row_ptr[r];
    const std::uint64_t base = r & ~tmask;
    for (const auto& [j, v] : urows[i]) {
      op->col[e] = static_cast<std::uint32_t>(base | scatter[j]);
      op->val[e] = v;
      ++e;
    }
  }
  return op;
}

std::shared_ptr<const SparseOp> MemoCache::get_or_build(const std::string& op_key,
                                                        const std::vector<int>& targets, int n,
                                                        const Mat& u) {
  std::string key = op_key;
  key += "|n=";
  key += std::to_string(n);
  key += "|t=";
  for (int t : targets) {
    key += std::to_string(t);
    key += ',';
  }
  if (auto it = index_.find(key); it != index_.end()) {
    ++hits_;
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->op;
  }
  ++misses_;
  auto op = build_expansion(u, targets, n);
  const std::size_t sz = op->bytes();
  if (sz <= capacity_) {
    while (bytes_ + sz > capacity_ && !lru_.empty()) {
      bytes_ -= lru_.back().op->bytes();
      index_.erase(lru_.back().key);
      lru_.pop_back();
    }
    lru_.push_front(Entry{key, op});
    index_[key] = lru_.begin();
    bytes_ += sz;
  }
  return op;
}

void MemoCache::set_capacity_bytes(std::size_t cap) {
  capacity_ = cap;
  while (bytes_ > capacity_ && !lru_.empty()) {
    bytes_ -= lru_.back().op->bytes();
    index_.erase(lru_.back().key);
    lru_.pop_back();
  }
}

void MemoCache::clear() {
  lru_.clear();
  index_.clear();
  bytes_ = 0;
}

}  // namespace qnet::quant
