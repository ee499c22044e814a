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

#include "dialeval/models/embedding.h"

#include <numeric>

#include "dialeval/errors.h"
#include "dialeval/models/negatives.h"

namespace dialeval {

EmbeddingModel::EmbeddingModel(size_t vocab_size, int d, bool single_dict,
                               double init_std, Rng& rng)
    : u_in_(Matrix::Gaussian(vocab_size, d, init_std, rng)) {
  if (!single_dict) u_out_ = Matrix::Gaussian(vocab_size, d, init_std, rng);
}

EmbeddingModel::EmbeddingModel(Matrix u_in, std::optional<Matrix> u_out)
    : u_in_(std::move(u_in)), u_out_(std::move(u_out)) {}

double EmbeddingModel::ScorePair(const BagOfTokens& x, const BagOfTokens& y) const {
  return Dot(EmbedSum(x, u_in_), EmbedSum(y, u_out()));
}

std::vector<double> EmbeddingModel::Score(const EncodedExample& ex) const {
  const Vector q = EmbedSum(ex.FullInput(), u_in_);
  std::vector<double> scores(ex.num_candidates());
  for (size_t c = 0; c < scores.size(); ++c) {
    scores[c] = Dot(q, EmbedSum(ex.candidate(c), u_out()));
  }
  return scores;
}

double EmbeddingModel::HingeLoss(const BagOfTokens& x, const BagOfTokens& pos,
                                 std::span<const BagOfTokens* const> negs,
                                 double margin, Gradient* grad) const {
  const Vector ex = EmbedSum(x, u_in_);
  const Vector ep = EmbedSum(pos, u_out());
  const double fp = Dot(ex, ep);
  const size_t d = ex.size();
  Vector d_ex(d, 0.0);
  double loss = 0;
  for (const BagOfTokens* neg : negs) {
    const Vector en = EmbedSum(*neg, u_out());
    const double l = margin - fp + Dot(ex, en);
    if (l <= 0) continue;
    loss += l;
    if (grad) {
      Axpy(1.0, en, d_ex);
      Axpy(-1.0, ep, d_ex);
      grad->out.AddBag(*neg, 1.0, ex);
      grad->out.AddBag(pos, -1.0, ex);
    }
  }
  if (grad) grad->in.AddBag(x, 1.0, d_ex);
  return loss;
}

void EmbeddingModel::Apply(const Gradient& grad, double lr) {
  grad.in.ApplyTo(u_in_, lr);
  grad.out.ApplyTo(u_out(), lr);
}

std::vector<double> EmbeddingModel::Train(
    const std::vector<EncodedExample>& data, const TrainConfig& cfg,
    const std::shared_ptr<const CandidateSet>& responses, const EpochLog& log) {
  if (data.empty()) throw DataError("no training examples");
  const CandidateSet empty;
  const CandidateSet& pool = responses ? *responses : empty;
  Rng rng(DeriveSeed(cfg.seed, 101));
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> losses;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Shuffle(&order, rng);
    double total = 0;
    size_t step = 0;
    for (size_t i : order) {
      ++step;
      const EncodedExample& ex = data[i];
      const BagOfTokens x = ex.FullInput();
      const int g = ex.gold[UniformInt(rng, 0, static_cast<int>(ex.gold.size()) - 1)];
      const auto negs = SampleNegatives(ex, pool, cfg.n_neg, rng);
      Gradient grad{RowGradient(u_in_.cols()), RowGradient(u_in_.cols())};
      const double loss = HingeLoss(x, ex.candidate(g), negs, cfg.margin, &grad);
      if (!std::isfinite(loss)) {
        throw NumericalError("non-finite loss at epoch " + std::to_string(epoch) +
                             ", step " + std::to_string(step));
      }
      total += loss;
      Apply(grad, cfg.lambda);
      for (TokenId id : grad.in.rows()) {
        for (double v : u_in_.Row(id)) {
          if (!std::isfinite(v)) {
            throw NumericalError("embedding diverged at epoch " + std::to_string(epoch) +
                                 ", step " + std::to_string(step));
          }
        }
      }
      for (TokenId id : grad.out.rows()) {
        for (double v : u_out().Row(id)) {
          if (!std::isfinite(v)) {
            throw NumericalError("embedding diverged at epoch " + std::to_string(epoch) +
                                 ", step " + std::to_string(step));
          }
        }
      }
    }
    losses.push_back(total / static_cast<double>(data.size()));
    if (log) log(epoch, losses.back());
  }
  return losses;
}

}  // namespace dialeval
