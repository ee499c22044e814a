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

#ifndef DIALEVAL_MODELS_MATRIX_H_
#define DIALEVAL_MODELS_MATRIX_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "dialeval/random.h"
#include "dialeval/text/vocabulary.h"

namespace dialeval {

// Row-major dense matrix of doubles. Embedding tables keep one row per
// vocabulary symbol (V x d), the transpose of the column convention in
// the model equations; the arithmetic is the same.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix Gaussian(size_t rows, size_t cols, double stddev, Rng& rng) {
    Matrix m(rows, cols);
    std::normal_distribution<double> dist(0.0, stddev);
    for (double& x : m.data_) x = dist(rng);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> Row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> Row(size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }
  bool AllFinite() const {
    for (double x : data_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }
  bool operator==(const Matrix&) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

using Vector = std::vector<double>;

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// y += alpha * x
inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Sum of count-weighted rows of `m` over the bag.
inline Vector EmbedSum(const BagOfTokens& bag, const Matrix& m) {
  Vector out(m.cols(), 0.0);
  for (const auto& [id, count] : bag) Axpy(count, m.Row(id), out);
  return out;
}

// Numerically stable softmax.
inline Vector Softmax(std::span<const double> s) {
  Vector p(s.size());
  if (s.empty()) return p;
  double mx = s[0];
  for (double x : s) mx = std::max(mx, x);
  double z = 0;
  for (size_t i = 0; i < s.size(); ++i) z += (p[i] = std::exp(s[i] - mx));
  for (double& x : p) x /= z;
  return p;
}

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_MATRIX_H_
