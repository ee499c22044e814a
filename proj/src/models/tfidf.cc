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

#include "dialeval/models/tfidf.h"

#include <cmath>
#include <map>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

double Norm(const SparseVector& v) {
  double s = 0;
  for (const auto& [id, x] : v) s += x * x;
  return std::sqrt(s);
}

// Index of the most similar vector; ties go to the lowest index.
int Nearest(const SparseVector& q, const std::vector<SparseVector>& vs) {
  int best = -1;
  double best_sim = -1;
  for (size_t i = 0; i < vs.size(); ++i) {
    const double s = Cosine(q, vs[i]);
    if (s > best_sim) {
      best_sim = s;
      best = static_cast<int>(i);
    }
  }
  return best;
}

SparseVector AddScaled(const SparseVector& a, double alpha, const SparseVector& b) {
  std::map<TokenId, double> sum(a.begin(), a.end());
  for (const auto& [id, x] : b) sum[id] += alpha * x;
  return {sum.begin(), sum.end()};
}

}  // namespace

double Cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      dot += a[i++].second * b[j++].second;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  const double na = Norm(a), nb = Norm(b);
  return na > 0 && nb > 0 ? dot / (na * nb) : 0.0;
}

TfIdfModel::TfIdfModel(Vector idf, Options options)
    : idf_(std::move(idf)), options_(options) {
  if (options_.variant != 1 && options_.variant != 2) {
    throw UsageError("tf-idf variant must be 1 or 2");
  }
}

Vector TfIdfModel::ComputeIdf(const std::vector<BagOfTokens>& docs, size_t vocab_size) {
  std::vector<int64_t> df(vocab_size, 0);
  for (const BagOfTokens& doc : docs) {
    for (const auto& [id, count] : doc) ++df[id];
  }
  const double n = static_cast<double>(std::max<size_t>(1, docs.size()));
  Vector idf(vocab_size);
  for (size_t t = 0; t < vocab_size; ++t) {
    idf[t] = df[t] > 0 ? std::log(n / static_cast<double>(df[t])) : std::log(n);
  }
  return idf;
}

void TfIdfModel::SetPairs(std::vector<Pair> pairs) {
  pairs_ = std::move(pairs);
  message_vecs_.clear();
  response_vecs_.clear();
  for (const Pair& p : pairs_) {
    message_vecs_.push_back(Weigh(p.message));
    response_vecs_.push_back(Weigh(p.response));
  }
}

std::vector<TfIdfModel::Pair> TfIdfModel::PairsFrom(
    const std::vector<EncodedExample>& train, bool use_context) {
  std::vector<Pair> out;
  out.reserve(train.size());
  for (const EncodedExample& ex : train) {
    Pair p{use_context ? ex.FullInput() : ex.input, {}};
    for (int g : ex.gold) p.response.Merge(ex.candidate(g));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<BagOfTokens> TfIdfModel::Documents(const std::vector<EncodedExample>& train) {
  std::vector<BagOfTokens> docs;
  for (const EncodedExample& ex : train) {
    for (const BagOfTokens& m : ex.messages) docs.push_back(m);
    docs.push_back(ex.input);
    BagOfTokens response;
    for (int g : ex.gold) response.Merge(ex.candidate(g));
    docs.push_back(std::move(response));
  }
  return docs;
}

SparseVector TfIdfModel::Weigh(const BagOfTokens& bag) const {
  SparseVector v;
  v.reserve(bag.size());
  for (const auto& [id, count] : bag) {
    const double idf = static_cast<size_t>(id) < idf_.size() ? idf_[id] : 0.0;
    if (idf != 0) v.emplace_back(id, count * idf);
  }
  return v;
}

std::vector<double> TfIdfModel::Score(const EncodedExample& ex) const {
  SparseVector query = Weigh(options_.use_context ? ex.FullInput() : ex.input);
  if (options_.variant == 1) {
    const int best = Nearest(query, message_vecs_);
    if (best < 0) throw UsageError("tf-idf variant 1 needs training pairs");
    query = response_vecs_[best];
  } else if (options_.rf_weight > 0 && !response_vecs_.empty()) {
    const int best = Nearest(query, response_vecs_);
    query = AddScaled(query, options_.rf_weight, response_vecs_[best]);
  }
  std::vector<double> scores(ex.num_candidates());
  for (size_t c = 0; c < scores.size(); ++c) {
    scores[c] = Cosine(query, Weigh(ex.candidate(c)));
  }
  return scores;
}

}  // namespace dialeval
