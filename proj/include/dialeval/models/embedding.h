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

#ifndef DIALEVAL_MODELS_EMBEDDING_H_
#define DIALEVAL_MODELS_EMBEDDING_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dialeval/models/config.h"
#include "dialeval/models/encoding.h"
#include "dialeval/models/matrix.h"
#include "dialeval/models/scorer.h"
#include "dialeval/models/sparse_grad.h"

namespace dialeval {

// Per-epoch callback: (epoch starting at 1, mean loss per step).
using EpochLog = std::function<void(int, double)>;

// Supervised embedding model f(x, y) = (sum_x U_in) . (sum_y U_out), with
// U_out an alias of U_in in the single dictionary flavour. The input bag is
// the concatenated context and input.
class EmbeddingModel : public Scorer {
 public:
  EmbeddingModel(size_t vocab_size, int d, bool single_dict, double init_std, Rng& rng);
  EmbeddingModel(Matrix u_in, std::optional<Matrix> u_out);

  bool single_dict() const { return !u_out_.has_value(); }
  int dim() const { return static_cast<int>(u_in_.cols()); }
  size_t vocab_size() const { return u_in_.rows(); }
  Matrix& u_in() { return u_in_; }
  const Matrix& u_in() const { return u_in_; }
  Matrix& u_out() { return u_out_ ? *u_out_ : u_in_; }
  const Matrix& u_out() const { return u_out_ ? *u_out_ : u_in_; }

  double ScorePair(const BagOfTokens& x, const BagOfTokens& y) const;
  std::vector<double> Score(const EncodedExample& ex) const override;

  struct Gradient {
    RowGradient in;
    RowGradient out;
  };
  // Sum over negatives of max(0, margin - f(x, pos) + f(x, neg)). When
  // `grad` is non-null it receives the gradient of that sum.
  double HingeLoss(const BagOfTokens& x, const BagOfTokens& pos,
                   std::span<const BagOfTokens* const> negs, double margin,
                   Gradient* grad) const;
  void Apply(const Gradient& grad, double lr);

  // SGD over `data` for cfg.epochs epochs with cfg.n_neg uniform negatives
  // per step: other entities for entity-ranking examples, other training
  // responses (from `responses`) otherwise. Returns per-epoch mean losses.
  std::vector<double> Train(const std::vector<EncodedExample>& data,
                            const TrainConfig& cfg,
                            const std::shared_ptr<const CandidateSet>& responses,
                            const EpochLog& log = {});

 private:
  Matrix u_in_;
  std::optional<Matrix> u_out_;
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_EMBEDDING_H_
