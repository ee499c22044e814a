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

#ifndef DIALEVAL_MODELS_MEMN2N_H_
#define DIALEVAL_MODELS_MEMN2N_H_

#include <memory>
#include <span>
#include <vector>

#include "dialeval/models/config.h"
#include "dialeval/models/embedding.h"
#include "dialeval/models/encoding.h"
#include "dialeval/models/matrix.h"
#include "dialeval/models/scorer.h"
#include "dialeval/models/sparse_grad.h"

namespace dialeval {

// End-to-end memory network over bag-of-words memories.
//
//   u_0 = sum A[input]           m_i = sum C[x_i] + T[slot_i]
//   p   = softmax(u_{k-1} . m_i)  u_k = u_{k-1} + R_k sum_i p_i m_i
//   score_c = u_K . sum W[y_c]    a = softmax(score)
//
// Dictionaries: w = 1 shares one table for A, C and W; w = 2 shares A and
// C with a separate W; w = 3 keeps all three separate. With no memory the
// hops are skipped.
class MemN2N : public Scorer {
 public:
  MemN2N(size_t vocab_size, int d, int hops, int w, int time_slots,
         double init_std, Rng& rng);
  // Takes the distinct embedding tables (w of them, in A, C, W order with
  // shared tables omitted), the hop matrices and the time table.
  MemN2N(std::vector<Matrix> embeddings, int w, std::vector<Matrix> hops, Matrix time);

  int dim() const { return static_cast<int>(T_.cols()); }
  int hops() const { return static_cast<int>(R_.size()); }
  int w() const { return w_; }
  size_t vocab_size() const { return emb_[0].rows(); }
  int time_slots() const { return static_cast<int>(T_.rows()); }

  Matrix& A() { return emb_[0]; }
  Matrix& C() { return emb_[c_index()]; }
  Matrix& W() { return emb_[w_index()]; }
  const Matrix& A() const { return emb_[0]; }
  const Matrix& C() const { return emb_[c_index()]; }
  const Matrix& W() const { return emb_[w_index()]; }
  std::vector<Matrix>& R() { return R_; }
  const std::vector<Matrix>& R() const { return R_; }
  Matrix& T() { return T_; }
  const Matrix& T() const { return T_; }
  const std::vector<Matrix>& embeddings() const { return emb_; }

  // Every distinct parameter matrix: embeddings, then R_1..R_K, then T.
  std::vector<Matrix*> Parameters();

  struct Trace {
    std::vector<Vector> u;          // u_0 .. u_K
    std::vector<Vector> attention;  // p per hop
    std::vector<Vector> read;       // sum_i p_i m_i per hop
    std::vector<Vector> memory;     // m_i
    std::vector<Vector> cand;       // sum W[y_c]
    Vector scores;
    Vector probs;
  };
  Trace Forward(const MemoryState& ms, std::span<const BagOfTokens* const> cands) const;

  struct Gradient {
    RowGradient a, c, w;
    std::vector<Matrix> r;
    Matrix t;
  };
  Gradient ZeroGradient() const;
  // -log of the probability mass on the gold candidates. `grad` receives
  // the gradient when non-null.
  double Loss(const MemoryState& ms, std::span<const BagOfTokens* const> cands,
              std::span<const int> gold, Gradient* grad) const;
  // Gradient as dense matrices aligned with Parameters().
  std::vector<Matrix> DenseGradient(const Gradient& grad) const;
  void Apply(const Gradient& grad, double lr);
  // One SGD step; returns the loss before the update.
  double TrainStep(const MemoryState& ms, std::span<const BagOfTokens* const> cands,
                   std::span<const int> gold, double lr);

  std::vector<double> Score(const EncodedExample& ex) const override;

  // Entity examples use the full softmax over entities; response examples
  // use the gold plus cfg.n_neg sampled training responses.
  std::vector<double> Train(const std::vector<EncodedExample>& data,
                            const TrainConfig& cfg,
                            const std::shared_ptr<const CandidateSet>& responses,
                            const EpochLog& log = {});

 private:
  size_t c_index() const { return w_ == 3 ? 1 : 0; }
  size_t w_index() const { return w_ == 1 ? 0 : emb_.size() - 1; }
  void CheckFinite(const Gradient& grad, int epoch, size_t step) const;

  int w_;
  std::vector<Matrix> emb_;
  std::vector<Matrix> R_;
  Matrix T_;
};

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_MEMN2N_H_
