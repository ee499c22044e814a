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

#include "dialeval/models/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

constexpr char kMagic[8] = {'D', 'I', 'A', 'L', 'E', 'V', 'A', 'L'};
constexpr uint32_t kVersion = 1;

template <typename T>
void PutLe(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  char bytes[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes, sizeof(T));
}

template <typename T>
T GetLe(std::istream& in, const std::string& path) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw DataError(path + ": truncated model file");
  }
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

// Sparse training pairs of the tf-idf model as rows (pair, side, token, count).
Matrix PairsMatrix(const std::vector<TfIdfModel::Pair>& pairs) {
  size_t n = 0;
  for (const auto& p : pairs) n += p.message.size() + p.response.size();
  Matrix m(n, 4);
  size_t row = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      for (const auto& [id, count] : side == 0 ? pairs[i].message : pairs[i].response) {
        m(row, 0) = static_cast<double>(i);
        m(row, 1) = side;
        m(row, 2) = id;
        m(row, 3) = count;
        ++row;
      }
    }
  }
  return m;
}

std::vector<TfIdfModel::Pair> PairsFromMatrix(const Matrix& m) {
  std::vector<TfIdfModel::Pair> pairs;
  for (size_t r = 0; r < m.rows(); ++r) {
    const size_t i = static_cast<size_t>(m(r, 0));
    if (i >= pairs.size()) pairs.resize(i + 1);
    BagOfTokens& bag = m(r, 1) == 0 ? pairs[i].message : pairs[i].response;
    bag.Add(static_cast<TokenId>(m(r, 2)), static_cast<int>(m(r, 3)));
  }
  return pairs;
}

Matrix ColumnOf(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  m.data() = v;
  return m;
}

}  // namespace

const Scorer& ModelBundle::scorer() const {
  switch (config.model) {
    case ModelKind::kSupEmb:
      if (supemb) return *supemb;
      break;
    case ModelKind::kMemN2N:
      if (memn2n) return *memn2n;
      break;
    case ModelKind::kIr:
      if (ir) return *ir;
      break;
    case ModelKind::kMf:
      if (mf) return *mf;
      break;
  }
  throw Error("model bundle has no parameters for its kind");
}

void WriteMatrices(const std::string& path, const ModelHeader& header,
                   const std::vector<const Matrix*>& matrices) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  PutLe<uint32_t>(out, header.version);
  PutLe<uint32_t>(out, static_cast<uint32_t>(header.kind));
  PutLe<uint32_t>(out, header.d);
  PutLe<uint64_t>(out, header.vocab_size);
  PutLe<uint32_t>(out, header.hops);
  PutLe<uint32_t>(out, header.w);
  PutLe<uint32_t>(out, static_cast<uint32_t>(matrices.size()));
  for (const Matrix* m : matrices) {
    PutLe<uint64_t>(out, m->rows());
    PutLe<uint64_t>(out, m->cols());
    for (double x : m->data()) PutLe<uint64_t>(out, std::bit_cast<uint64_t>(x));
  }
  if (!out) throw DataError("write failed: " + path);
}

std::vector<Matrix> ReadMatrices(const std::string& path, ModelHeader* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path + ": not a model file");
  }
  ModelHeader h;
  h.version = GetLe<uint32_t>(in, path);
  if (h.version != kVersion) {
    throw DataError(path + ": unsupported model version " + std::to_string(h.version));
  }
  const uint32_t kind = GetLe<uint32_t>(in, path);
  if (kind < 1 || kind > 4) throw DataError(path + ": unknown model kind");
  h.kind = static_cast<ModelKind>(kind);
  h.d = GetLe<uint32_t>(in, path);
  h.vocab_size = GetLe<uint64_t>(in, path);
  h.hops = GetLe<uint32_t>(in, path);
  h.w = GetLe<uint32_t>(in, path);
  const uint32_t n = GetLe<uint32_t>(in, path);
  std::vector<Matrix> out;
  for (uint32_t i = 0; i < n; ++i) {
    const uint64_t rows = GetLe<uint64_t>(in, path);
    const uint64_t cols = GetLe<uint64_t>(in, path);
    if (cols != 0 && rows > (uint64_t{1} << 40) / cols) {
      throw DataError(path + ": implausible matrix shape");
    }
    Matrix m(rows, cols);
    for (double& x : m.data()) x = std::bit_cast<double>(GetLe<uint64_t>(in, path));
    out.push_back(std::move(m));
  }
  if (header) *header = h;
  return out;
}

void SaveModel(const std::string& path, const ModelBundle& model) {
  ModelHeader h;
  h.version = kVersion;
  h.kind = model.kind();
  h.d = static_cast<uint32_t>(model.config.d);
  std::vector<const Matrix*> mats;
  Matrix extra1, extra2;
  switch (model.kind()) {
    case ModelKind::kSupEmb: {
      const EmbeddingModel& m = *model.supemb;
      h.vocab_size = m.vocab_size();
      h.w = m.single_dict() ? 1 : 2;
      mats.push_back(&m.u_in());
      if (!m.single_dict()) mats.push_back(&m.u_out());
      break;
    }
    case ModelKind::kMemN2N: {
      const MemN2N& m = *model.memn2n;
      h.vocab_size = m.vocab_size();
      h.hops = static_cast<uint32_t>(m.hops());
      h.w = static_cast<uint32_t>(m.w());
      for (const Matrix& e : m.embeddings()) mats.push_back(&e);
      for (const Matrix& r : m.R()) mats.push_back(&r);
      mats.push_back(&m.T());
      break;
    }
    case ModelKind::kIr: {
      const TfIdfModel& m = *model.ir;
      h.vocab_size = m.idf().size();
      extra1 = ColumnOf(m.idf());
      extra2 = PairsMatrix(m.pairs());
      mats = {&extra1, &extra2};
      break;
    }
    case ModelKind::kMf: {
      const MfModel& m = *model.mf;
      h.vocab_size = m.items().rows();
      extra1 = ColumnOf(std::vector<double>(m.known().begin(), m.known().end()));
      mats = {&m.users(), &m.items(), &extra1};
      break;
    }
  }
  WriteMatrices(path, h, mats);
  model.config.Save(path + ".cfg");
}

ModelBundle LoadModel(const std::string& path) {
  ModelBundle b;
  b.config = TrainConfig::Load(path + ".cfg");
  ModelHeader h;
  std::vector<Matrix> mats = ReadMatrices(path, &h);
  if (h.kind != b.config.model) {
    throw DataError(path + ": model kind disagrees with its .cfg");
  }
  auto need = [&](size_t n) {
    if (mats.size() != n) {
      throw DataError(path + ": expected " + std::to_string(n) + " matrices, found " +
                      std::to_string(mats.size()));
    }
  };
  switch (h.kind) {
    case ModelKind::kSupEmb:
      need(h.w == 1 ? 1 : 2);
      b.supemb = std::make_unique<EmbeddingModel>(
          std::move(mats[0]), h.w == 1 ? std::nullopt : std::optional<Matrix>(std::move(mats[1])));
      break;
    case ModelKind::kMemN2N: {
      need(h.w + h.hops + 1);
      std::vector<Matrix> emb(std::make_move_iterator(mats.begin()),
                              std::make_move_iterator(mats.begin() + h.w));
      std::vector<Matrix> hops(std::make_move_iterator(mats.begin() + h.w),
                               std::make_move_iterator(mats.begin() + h.w + h.hops));
      b.memn2n = std::make_unique<MemN2N>(std::move(emb), static_cast<int>(h.w),
                                          std::move(hops), std::move(mats.back()));
      break;
    }
    case ModelKind::kIr: {
      need(2);
      TfIdfModel::Options opt{b.config.ir_variant, b.config.ir_context, b.config.rf_weight};
      b.ir = std::make_unique<TfIdfModel>(mats[0].data(), opt);
      b.ir->SetPairs(PairsFromMatrix(mats[1]));
      break;
    }
    case ModelKind::kMf: {
      need(3);
      std::vector<uint8_t> known;
      for (double x : mats[2].data()) known.push_back(x != 0 ? 1 : 0);
      b.mf = std::make_unique<MfModel>(std::move(mats[0]), std::move(mats[1]),
                                       std::move(known), b.config.mf_reg);
      break;
    }
  }
  return b;
}

}  // namespace dialeval
