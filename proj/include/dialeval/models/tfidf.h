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

#ifndef DIALEVAL_MODELS_TFIDF_H_
#define DIALEVAL_MODELS_TFIDF_H_

#include <utility>
#include <vector>

#include "dialeval/models/encoding.h"
#include "dialeval/models/matrix.h"
#include "dialeval/models/scorer.h"

namespace dialeval {

using SparseVector = std::vector<std::pair<TokenId, double>>;

double Cosine(const SparseVector& a, const SparseVector& b);

// TF-IDF cosine ranker. idf(t) = ln(N / df(t)) over the training
// documents; tokens never seen get ln(N).
//
// Variant 2 scores each candidate against the query; variant 1 first finds
// the most similar training message and scores candidates against its
// response. With relevance feedback the best-matching training response is
// added to the query with weight rf_weight.
class TfIdfModel : public Scorer {
 public:
  struct Options {
    int variant = 2;
    bool use_context = true;
    double rf_weight = 0.0;
  };
  struct Pair {
    BagOfTokens message;
    BagOfTokens response;
  };

  TfIdfModel(Vector idf, Options options);
  static Vector ComputeIdf(const std::vector<BagOfTokens>& docs, size_t vocab_size);

  // Training (message, response) pairs used by variant 1 and relevance
  // feedback.
  void SetPairs(std::vector<Pair> pairs);
  static std::vector<Pair> PairsFrom(const std::vector<EncodedExample>& train,
                                     bool use_context);
  // Every message of the training examples: context turns, input, gold.
  static std::vector<BagOfTokens> Documents(const std::vector<EncodedExample>& train);

  const Vector& idf() const { return idf_; }
  const Options& options() const { return options_; }
  const std::vector<Pair>& pairs() const { return pairs_; }

  SparseVector Weigh(const BagOfTokens& bag) const;
  std::vector<double> Score(const EncodedExample& ex) const override;

 private:
  Vector idf_;
  Options options_;
  std::vector<Pair> pairs_;
  std::vector<SparseVector> message_vecs_;
  std::vector<SparseVector> response_vecs_;
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_TFIDF_H_
