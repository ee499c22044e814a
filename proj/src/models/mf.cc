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

#include "dialeval/models/mf.h"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "dialeval/errors.h"

namespace dialeval {

MfModel::MfModel(Matrix users, Matrix items, std::vector<uint8_t> known, double reg)
    : users_(std::move(users)), items_(std::move(items)), known_(std::move(known)), reg_(reg) {
  if (known_.size() != items_.rows() || users_.cols() != items_.cols()) {
    throw DataError("mf: inconsistent parameter shapes");
  }
}

MfModel MfModel::Train(std::span<const RatingTriple> ratings, size_t num_users,
                       size_t vocab_size, const TrainConfig& cfg,
                       std::vector<double>* epoch_rmse) {
  if (ratings.empty()) throw DataError("mf: no ratings");
  Rng rng(DeriveSeed(cfg.seed, 301));
  Matrix p = Matrix::Gaussian(num_users, cfg.d, cfg.init_std, rng);
  Matrix q = Matrix::Gaussian(vocab_size, cfg.d, cfg.init_std, rng);
  std::vector<uint8_t> known(vocab_size, 0);
  for (const RatingTriple& r : ratings) {
    if (r.user < 0 || static_cast<size_t>(r.user) >= num_users ||
        r.item < 0 || static_cast<size_t>(r.item) >= vocab_size) {
      throw DataError("mf: rating index out of range");
    }
    known[r.item] = 1;
  }
  std::vector<size_t> order(ratings.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t d = cfg.d;
  Vector pu(d);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Shuffle(&order, rng);
    double sq = 0;
    for (size_t i : order) {
      const RatingTriple& r = ratings[i];
      auto pr = p.Row(r.user);
      auto qr = q.Row(r.item);
      const double e = r.value - Dot(pr, qr);
      sq += e * e;
      std::copy(pr.begin(), pr.end(), pu.begin());
      for (size_t k = 0; k < d; ++k) {
        pr[k] += cfg.lambda * (e * qr[k] - cfg.mf_reg * pr[k]);
        qr[k] += cfg.lambda * (e * pu[k] - cfg.mf_reg * qr[k]);
      }
      if (!std::isfinite(e) || !std::isfinite(pr[0]) || !std::isfinite(qr[0])) {
        throw NumericalError("mf diverged at epoch " + std::to_string(epoch));
      }
    }
    if (epoch_rmse) epoch_rmse->push_back(std::sqrt(sq / static_cast<double>(ratings.size())));
  }
  if (!p.AllFinite() || !q.AllFinite()) throw NumericalError("mf diverged");
  return MfModel(std::move(p), std::move(q), std::move(known), cfg.mf_reg);
}

double MfModel::Predict(int user, TokenId item) const {
  return Dot(users_.Row(user), items_.Row(item));
}

Vector MfModel::FitUser(std::span<const TokenId> history) const {
  const size_t d = items_.cols();
  std::vector<TokenId> rows;
  for (TokenId t : history) {
    if (t >= 0 && static_cast<size_t>(t) < known_.size() && known_[t]) rows.push_back(t);
  }
  if (rows.empty()) return Vector(d, 0.0);
  Eigen::MatrixXd q(rows.size(), d);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t k = 0; k < d; ++k) q(i, k) = items_(rows[i], k);
  }
  const Eigen::VectorXd target = Eigen::VectorXd::Constant(rows.size(), 5.0);
  Eigen::VectorXd x;
  if (reg_ > 0) {
    const Eigen::MatrixXd gram =
        q.transpose() * q + reg_ * Eigen::MatrixXd::Identity(d, d);
    x = gram.ldlt().solve(q.transpose() * target);
  } else {
    x = q.completeOrthogonalDecomposition().solve(target);
  }
  return Vector(x.data(), x.data() + d);
}

std::vector<TokenId> MfModel::Rank(std::span<const TokenId> history) const {
  const Vector u = FitUser(history);
  const std::set<TokenId> seen(history.begin(), history.end());
  std::vector<std::pair<double, TokenId>> scored;
  for (size_t t = 0; t < known_.size(); ++t) {
    if (!known_[t] || seen.contains(static_cast<TokenId>(t))) continue;
    scored.emplace_back(-Dot(u, items_.Row(t)), static_cast<TokenId>(t));
  }
  std::sort(scored.begin(), scored.end());
  std::vector<TokenId> out;
  out.reserve(scored.size());
  for (const auto& [s, t] : scored) out.push_back(t);
  return out;
}

std::vector<double> MfModel::Score(const EncodedExample& ex) const {
  std::set<TokenId> history;
  auto collect = [&](const BagOfTokens& bag) {
    for (const auto& [id, count] : bag) {
      if (static_cast<size_t>(id) < known_.size() && known_[id]) history.insert(id);
    }
  };
  collect(ex.input);
  for (size_t j = 0; j < ex.messages.size(); j += 2) collect(ex.messages[j]);
  const std::vector<TokenId> hist(history.begin(), history.end());
  const Vector u = FitUser(hist);

  std::vector<double> scores(ex.num_candidates());
  for (size_t c = 0; c < scores.size(); ++c) {
    double s = 0;
    bool any = false;
    for (const auto& [id, count] : ex.candidate(c)) {
      if (static_cast<size_t>(id) >= known_.size() || !known_[id] || history.contains(id)) {
        continue;
      }
      s += count * Dot(u, items_.Row(id));
      any = true;
    }
    scores[c] = any ? s : -std::numeric_limits<double>::infinity();
  }
  return scores;
}

}  // namespace dialeval
