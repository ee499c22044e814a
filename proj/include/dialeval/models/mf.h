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

#ifndef DIALEVAL_MODELS_MF_H_
#define DIALEVAL_MODELS_MF_H_

#include <span>
#include <vector>

#include "dialeval/models/config.h"
#include "dialeval/models/encoding.h"
#include "dialeval/models/matrix.h"
#include "dialeval/models/scorer.h"

namespace dialeval {

struct RatingTriple {
  int user = 0;
  TokenId item = 0;  // vocabulary id of the movie entity
  double value = 0;
};

// Matrix factorization recommender: r(u, i) ~ P[u] . Q[i], trained by SGD
// on squared error with L2 regularization. Items are indexed by vocabulary
// id; `known` marks items seen in training.
class MfModel : public Scorer {
 public:
  MfModel(Matrix users, Matrix items, std::vector<uint8_t> known, double reg);

  static MfModel Train(std::span<const RatingTriple> ratings, size_t num_users,
                       size_t vocab_size, const TrainConfig& cfg,
                       std::vector<double>* epoch_rmse = nullptr);

  const Matrix& users() const { return users_; }
  const Matrix& items() const { return items_; }
  const std::vector<uint8_t>& known() const { return known_; }
  double reg() const { return reg_; }

  double Predict(int user, TokenId item) const;
  // Least-squares user vector fitted to rating 5 on every history item.
  Vector FitUser(std::span<const TokenId> history) const;
  // Known items outside the history, by predicted score desc then id asc.
  std::vector<TokenId> Rank(std::span<const TokenId> history) const;

  // History is the known items mentioned by the user side of the dialog.
  // Candidates score the sum over their known, non-history items, or -inf
  // when they have none.
  std::vector<double> Score(const EncodedExample& ex) const override;

 private:
  Matrix users_;
  Matrix items_;
  std::vector<uint8_t> known_;
  double reg_;
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_MF_H_
