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

#include "dialeval/models/memn2n.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dialeval/errors.h"
#include "dialeval/models/negatives.h"

namespace dialeval {

namespace {

double LogSumExp(std::span<const double> s) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : s) mx = std::max(mx, x);
  double z = 0;
  for (double x : s) z += std::exp(x - mx);
  return mx + std::log(z);
}

int NumTables(int w) {
  if (w < 1 || w > 3) throw UsageError("w must be in 1..3");
  return w;
}

}  // namespace

MemN2N::MemN2N(size_t vocab_size, int d, int hops, int w, int time_slots,
               double init_std, Rng& rng)
    : w_(w) {
  for (int i = 0; i < NumTables(w); ++i) {
    emb_.push_back(Matrix::Gaussian(vocab_size, d, init_std, rng));
  }
  for (int k = 0; k < hops; ++k) R_.push_back(Matrix::Gaussian(d, d, init_std, rng));
  T_ = Matrix::Gaussian(std::max(1, time_slots), d, init_std, rng);
}

MemN2N::MemN2N(std::vector<Matrix> embeddings, int w, std::vector<Matrix> hops,
               Matrix time)
    : w_(w), emb_(std::move(embeddings)), R_(std::move(hops)), T_(std::move(time)) {
  if (static_cast<int>(emb_.size()) != NumTables(w)) {
    throw DataError("memn2n: expected " + std::to_string(w) + " embedding tables");
  }
  const size_t d = T_.cols();
  for (const Matrix& m : emb_) {
    if (m.cols() != d || m.rows() != emb_[0].rows()) {
      throw DataError("memn2n: inconsistent embedding shapes");
    }
  }
  for (const Matrix& r : R_) {
    if (r.rows() != d || r.cols() != d) throw DataError("memn2n: bad hop matrix shape");
  }
}

std::vector<Matrix*> MemN2N::Parameters() {
  std::vector<Matrix*> out;
  for (Matrix& m : emb_) out.push_back(&m);
  for (Matrix& r : R_) out.push_back(&r);
  out.push_back(&T_);
  return out;
}

MemN2N::Trace MemN2N::Forward(const MemoryState& ms,
                              std::span<const BagOfTokens* const> cands) const {
  const size_t d = T_.cols();
  Trace tr;
  tr.u.push_back(EmbedSum(ms.input, A()));
  tr.memory.reserve(ms.items.size());
  for (const MemoryItem& item : ms.items) {
    Vector m = EmbedSum(item.bag, C());
    Axpy(1.0, T_.Row(std::min<size_t>(item.slot, T_.rows() - 1)), m);
    tr.memory.push_back(std::move(m));
  }
  if (!tr.memory.empty()) {
    for (const Matrix& r : R_) {
      const Vector& u = tr.u.back();
      Vector s(tr.memory.size());
      for (size_t i = 0; i < s.size(); ++i) s[i] = Dot(u, tr.memory[i]);
      Vector p = Softmax(s);
      Vector v(d, 0.0);
      for (size_t i = 0; i < p.size(); ++i) Axpy(p[i], tr.memory[i], v);
      Vector next = u;
      for (size_t a = 0; a < d; ++a) next[a] += Dot(r.Row(a), v);
      tr.attention.push_back(std::move(p));
      tr.read.push_back(std::move(v));
      tr.u.push_back(std::move(next));
    }
  }
  const Vector& q = tr.u.back();
  tr.cand.reserve(cands.size());
  tr.scores.resize(cands.size());
  for (size_t c = 0; c < cands.size(); ++c) {
    tr.cand.push_back(EmbedSum(*cands[c], W()));
    tr.scores[c] = Dot(q, tr.cand.back());
  }
  tr.probs = Softmax(tr.scores);
  return tr;
}

MemN2N::Gradient MemN2N::ZeroGradient() const {
  const size_t d = T_.cols();
  Gradient g{RowGradient(d), RowGradient(d), RowGradient(d), {}, Matrix(T_.rows(), d)};
  for (size_t k = 0; k < R_.size(); ++k) g.r.emplace_back(d, d);
  return g;
}

double MemN2N::Loss(const MemoryState& ms, std::span<const BagOfTokens* const> cands,
                    std::span<const int> gold, Gradient* grad) const {
  if (cands.empty()) throw DataError("memn2n: empty candidate list");
  if (gold.empty()) throw DataError("memn2n: empty gold set");
  const Trace tr = Forward(ms, cands);
  Vector gold_scores;
  for (int g : gold) gold_scores.push_back(tr.scores[g]);
  const double lse_all = LogSumExp(tr.scores);
  const double lse_gold = LogSumExp(gold_scores);
  const double loss = lse_all - lse_gold;
  if (!grad) return loss;

  const size_t d = T_.cols();
  // d loss / d score_c = a_c - [c in gold] exp(score_c - lse_gold)
  Vector dscore = tr.probs;
  for (int g : gold) dscore[g] -= std::exp(tr.scores[g] - lse_gold);

  const Vector& q = tr.u.back();
  Vector du(d, 0.0);
  for (size_t c = 0; c < cands.size(); ++c) {
    Axpy(dscore[c], tr.cand[c], du);
    grad->w.AddBag(*cands[c], dscore[c], q);
  }

  std::vector<Vector> dm(tr.memory.size(), Vector(d, 0.0));
  for (size_t k = tr.attention.size(); k-- > 0;) {
    const Matrix& r = R_[k];
    const Vector& p = tr.attention[k];
    const Vector& v = tr.read[k];
    const Vector& u_prev = tr.u[k];
    Matrix& dr = grad->r[k];
    for (size_t a = 0; a < d; ++a) Axpy(du[a], v, dr.Row(a));
    Vector dv(d, 0.0);
    for (size_t a = 0; a < d; ++a) Axpy(du[a], r.Row(a), dv);
    Vector dp(p.size());
    double mean = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      dp[i] = Dot(dv, tr.memory[i]);
      mean += p[i] * dp[i];
    }
    Vector next = du;
    for (size_t i = 0; i < p.size(); ++i) {
      const double ds = p[i] * (dp[i] - mean);
      Axpy(p[i], dv, dm[i]);
      Axpy(ds, u_prev, dm[i]);
      Axpy(ds, tr.memory[i], next);
    }
    du = std::move(next);
  }
  for (size_t i = 0; i < tr.memory.size(); ++i) {
    const MemoryItem& item = ms.items[i];
    grad->c.AddBag(item.bag, 1.0, dm[i]);
    Axpy(1.0, dm[i], grad->t.Row(std::min<size_t>(item.slot, T_.rows() - 1)));
  }
  grad->a.AddBag(ms.input, 1.0, du);
  return loss;
}

std::vector<Matrix> MemN2N::DenseGradient(const Gradient& grad) const {
  std::vector<Matrix> out;
  for (const Matrix& m : emb_) out.emplace_back(m.rows(), m.cols());
  auto scatter = [](const RowGradient& g, Matrix& m) {
    for (TokenId id : g.rows()) {
      for (size_t c = 0; c < m.cols(); ++c) m(id, c) += g.Get(id, c);
    }
  };
  scatter(grad.a, out[0]);
  scatter(grad.c, out[c_index()]);
  scatter(grad.w, out[w_index()]);
  for (const Matrix& r : grad.r) out.push_back(r);
  out.push_back(grad.t);
  return out;
}

void MemN2N::Apply(const Gradient& grad, double lr) {
  grad.a.ApplyTo(A(), lr);
  grad.c.ApplyTo(C(), lr);
  grad.w.ApplyTo(W(), lr);
  for (size_t k = 0; k < R_.size(); ++k) Axpy(-lr, grad.r[k].data(), R_[k].data());
  Axpy(-lr, grad.t.data(), T_.data());
}

double MemN2N::TrainStep(const MemoryState& ms, std::span<const BagOfTokens* const> cands,
                         std::span<const int> gold, double lr) {
  Gradient grad = ZeroGradient();
  const double loss = Loss(ms, cands, gold, &grad);
  if (!std::isfinite(loss)) throw NumericalError("memn2n: non-finite loss");
  Apply(grad, lr);
  return loss;
}

std::vector<double> MemN2N::Score(const EncodedExample& ex) const {
  std::vector<const BagOfTokens*> cands(ex.num_candidates());
  for (size_t c = 0; c < cands.size(); ++c) cands[c] = &ex.candidate(c);
  return Forward(ex.memory, cands).scores;
}

void MemN2N::CheckFinite(const Gradient& grad, int epoch, size_t step) const {
  bool ok = T_.AllFinite();
  for (const Matrix& r : R_) ok = ok && r.AllFinite();
  auto rows_ok = [](const RowGradient& g, const Matrix& m) {
    for (TokenId id : g.rows()) {
      for (double v : m.Row(id)) {
        if (!std::isfinite(v)) return false;
      }
    }
    return true;
  };
  ok = ok && rows_ok(grad.a, A()) && rows_ok(grad.c, C()) && rows_ok(grad.w, W());
  if (!ok) {
    throw NumericalError("memn2n diverged at epoch " + std::to_string(epoch) +
                         ", step " + std::to_string(step));
  }
}

std::vector<double> MemN2N::Train(const std::vector<EncodedExample>& data,
                                  const TrainConfig& cfg,
                                  const std::shared_ptr<const CandidateSet>& responses,
                                  const EpochLog& log) {
  if (data.empty()) throw DataError("no training examples");
  const CandidateSet empty;
  const CandidateSet& pool = responses ? *responses : empty;
  Rng rng(DeriveSeed(cfg.seed, 201));
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  // Candidate pointer lists for shared entity sets, built once.
  std::vector<const BagOfTokens*> entity_ptrs;
  const CandidateSet* entity_set = nullptr;

  std::vector<double> losses;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Shuffle(&order, rng);
    double total = 0;
    size_t step = 0;
    for (size_t i : order) {
      ++step;
      const EncodedExample& ex = data[i];
      std::vector<const BagOfTokens*> local;
      std::vector<int> gold;
      std::span<const BagOfTokens* const> cands;
      if (ex.entity_candidates) {
        if (entity_set != ex.candidates.get()) {
          entity_set = ex.candidates.get();
          entity_ptrs.clear();
          for (const BagOfTokens& b : entity_set->bags) entity_ptrs.push_back(&b);
        }
        cands = entity_ptrs;
        gold = ex.gold;
      } else {
        local.push_back(&*ex.appended);
        const auto negs = SampleNegatives(ex, pool, cfg.n_neg, rng);
        local.insert(local.end(), negs.begin(), negs.end());
        cands = local;
        gold = {0};
      }
      Gradient grad = ZeroGradient();
      const double loss = Loss(ex.memory, cands, gold, &grad);
      if (!std::isfinite(loss)) {
        throw NumericalError("memn2n: non-finite loss at epoch " + std::to_string(epoch) +
                             ", step " + std::to_string(step));
      }
      total += loss;
      Apply(grad, cfg.lambda);
      CheckFinite(grad, epoch, step);
    }
    losses.push_back(total / static_cast<double>(data.size()));
    if (log) log(epoch, losses.back());
  }
  return losses;
}

}  // namespace dialeval
