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

#include "dialeval/models/config.h"

#include <array>
#include <fstream>
#include <sstream>

#include "dialeval/errors.h"

namespace dialeval {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 4> kKindNames = {{
    {ModelKind::kSupEmb, "supemb"},
    {ModelKind::kMemN2N, "memn2n"},
    {ModelKind::kIr, "ir"},
    {ModelKind::kMf, "mf"},
}};

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T Parse(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) {
    throw DataError("config: bad value for " + key + ": '" + value + "'");
  }
  return out;
}

}  // namespace

std::string_view ModelKindName(ModelKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  for (const auto& [kind, n] : kKindNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

void TrainConfig::Validate() const {
  if (!(lambda > 0)) throw UsageError("learning rate must be positive");
  if (d < 1) throw UsageError("embedding dimension must be at least 1");
  if (epochs < 0) throw UsageError("epochs must be non-negative");
  if (!(margin >= 0)) throw UsageError("margin must be non-negative");
  if (n_neg < 1) throw UsageError("n_neg must be at least 1");
  const int max_w = model == ModelKind::kSupEmb ? 2 : 3;
  if (w < 1 || w > max_w) {
    throw UsageError("w must be in 1.." + std::to_string(max_w));
  }
  if (hops < 0) throw UsageError("hop count must be non-negative");
  if (!(init_std > 0)) throw UsageError("init_std must be positive");
  if (memory.hash_n < 0) throw UsageError("hash_n must be non-negative");
  if (memory.hash_cutoff < 0) throw UsageError("hash_cutoff must be non-negative");
  if (memory.max_memories < 0) throw UsageError("max_memories must be non-negative");
  if (ir_variant != 1 && ir_variant != 2) throw UsageError("ir_variant must be 1 or 2");
  if (!(rf_weight >= 0)) throw UsageError("rf_weight must be non-negative");
  if (!(mf_reg >= 0)) throw UsageError("mf_reg must be non-negative");
}

std::string TrainConfig::ToText() const {
  std::ostringstream out;
  out.precision(17);
  out << "model = " << ModelKindName(model) << '\n'
      << "lambda = " << lambda << '\n'
      << "d = " << d << '\n'
      << "epochs = " << epochs << '\n'
      << "margin = " << margin << '\n'
      << "n_neg = " << n_neg << '\n'
      << "w = " << w << '\n'
      << "hops = " << hops << '\n'
      << "seed = " << seed << '\n'
      << "init_std = " << init_std << '\n'
      << "use_kb = " << (memory.use_kb ? 1 : 0) << '\n'
      << "hash_n = " << memory.hash_n << '\n'
      << "hash_cutoff = " << memory.hash_cutoff << '\n'
      << "max_memories = " << memory.max_memories << '\n'
      << "ir_variant = " << ir_variant << '\n'
      << "ir_context = " << (ir_context ? 1 : 0) << '\n'
      << "rf_weight = " << rf_weight << '\n'
      << "mf_reg = " << mf_reg << '\n';
  return out.str();
}

TrainConfig TrainConfig::FromText(std::string_view text) {
  TrainConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) throw DataError("config: expected key = value: '" + t + "'");
    const std::string key = Trim(std::string_view(t).substr(0, eq));
    const std::string value = Trim(std::string_view(t).substr(eq + 1));
    if (key == "model") {
      const auto kind = ParseModelKind(value);
      if (!kind) throw DataError("config: unknown model '" + value + "'");
      c.model = *kind;
    } else if (key == "lambda") {
      c.lambda = Parse<double>(key, value);
    } else if (key == "d") {
      c.d = Parse<int>(key, value);
    } else if (key == "epochs") {
      c.epochs = Parse<int>(key, value);
    } else if (key == "margin") {
      c.margin = Parse<double>(key, value);
    } else if (key == "n_neg") {
      c.n_neg = Parse<int>(key, value);
    } else if (key == "w") {
      c.w = Parse<int>(key, value);
    } else if (key == "hops") {
      c.hops = Parse<int>(key, value);
    } else if (key == "seed") {
      c.seed = Parse<uint64_t>(key, value);
    } else if (key == "init_std") {
      c.init_std = Parse<double>(key, value);
    } else if (key == "use_kb") {
      c.memory.use_kb = Parse<int>(key, value) != 0;
    } else if (key == "hash_n") {
      c.memory.hash_n = Parse<int>(key, value);
    } else if (key == "hash_cutoff") {
      c.memory.hash_cutoff = Parse<int>(key, value);
    } else if (key == "max_memories") {
      c.memory.max_memories = Parse<int>(key, value);
    } else if (key == "ir_variant") {
      c.ir_variant = Parse<int>(key, value);
    } else if (key == "ir_context") {
      c.ir_context = Parse<int>(key, value) != 0;
    } else if (key == "rf_weight") {
      c.rf_weight = Parse<double>(key, value);
    } else if (key == "mf_reg") {
      c.mf_reg = Parse<double>(key, value);
    } else {
      throw DataError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

void TrainConfig::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << ToText();
  if (!out) throw DataError("write failed: " + path);
}

TrainConfig TrainConfig::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromText(buf.str());
}

}  // namespace dialeval
