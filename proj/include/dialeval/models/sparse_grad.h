// Copyright 2026 The Dialeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIALEVAL_MODELS_SPARSE_GRAD_H_
#define DIALEVAL_MODELS_SPARSE_GRAD_H_

#include <span>
#include <unordered_map>
#include <vector>

#include "dialeval/models/matrix.h"
#include "dialeval/text/vocabulary.h"

namespace dialeval {

// Gradient of an embedding table restricted to the rows a step touched.
class RowGradient {
 public:
  explicit RowGradient(size_t cols = 0) : cols_(cols) {}

  std::span<double> Row(TokenId id) {
    auto [it, inserted] = index_.emplace(id, ids_.size());
    if (inserted) {
      ids_.push_back(id);
      data_.resize(data_.size() + cols_, 0.0);
    }
    return {data_.data() + it->second * cols_, cols_};
  }
  // Adds alpha * x to every row of the bag, weighted by count.
  void AddBag(const BagOfTokens& bag, double alpha, std::span<const double> x) {
    for (const auto& [id, count] : bag) Axpy(alpha * count, x, Row(id));
  }
  double Get(TokenId id, size_t c) const {
    const auto it = index_.find(id);
    return it == index_.end() ? 0.0 : data_[it->second * cols_ + c];
  }
  // m -= lr * gradient
  void ApplyTo(Matrix& m, double lr) const {
    for (size_t i = 0; i < ids_.size(); ++i) {
      Axpy(-lr, std::span<const double>(data_.data() + i * cols_, cols_), m.Row(ids_[i]));
    }
  }
  const std::vector<TokenId>& rows() const { return ids_; }
  double SquaredNorm() const {
    double s = 0;
    for (double x : data_) s += x * x;
    return s;
  }

 private:
  size_t cols_;
  std::vector<TokenId> ids_;
  std::vector<double> data_;
  std::unordered_map<TokenId, size_t> index_;
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_SPARSE_GRAD_H_
