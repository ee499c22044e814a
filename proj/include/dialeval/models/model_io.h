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

#ifndef DIALEVAL_MODELS_MODEL_IO_H_
#define DIALEVAL_MODELS_MODEL_IO_H_

#include <memory>
#include <string>
#include <vector>

#include "dialeval/models/config.h"
#include "dialeval/models/embedding.h"
#include "dialeval/models/matrix.h"
#include "dialeval/models/memn2n.h"
#include "dialeval/models/mf.h"
#include "dialeval/models/tfidf.h"

namespace dialeval {

// A trained model of any kind plus the configuration it was trained with.
struct ModelBundle {
  TrainConfig config;
  std::unique_ptr<EmbeddingModel> supemb;
  std::unique_ptr<MemN2N> memn2n;
  std::unique_ptr<TfIdfModel> ir;
  std::unique_ptr<MfModel> mf;

  ModelKind kind() const { return config.model; }
  const Scorer& scorer() const;
};

// Binary model file: magic "DIALEVAL", u32 version, u32 kind, u32 d,
// u64 V, u32 K, u32 w, u32 matrix count, then per matrix u64 rows, u64 cols
// and rows*cols little-endian IEEE doubles, row-major. The configuration
// is written next to it as <path>.cfg.
void SaveModel(const std::string& path, const ModelBundle& model);
ModelBundle LoadModel(const std::string& path);

// Raw matrix container access, exposed for tests.
struct ModelHeader {
  uint32_t version = 1;
  ModelKind kind = ModelKind::kMemN2N;
  uint32_t d = 0;
  uint64_t vocab_size = 0;
  uint32_t hops = 0;
  uint32_t w = 0;
};
void WriteMatrices(const std::string& path, const ModelHeader& header,
                   const std::vector<const Matrix*>& matrices);
std::vector<Matrix> ReadMatrices(const std::string& path, ModelHeader* header);

}  // namespace dialeval

#endif  // DIALEVAL_MODELS_MODEL_IO_H_
