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

#ifndef DIALEVAL_TASKGEN_DATASET_IO_H_
#define DIALEVAL_TASKGEN_DATASET_IO_H_

#include <string>
#include <vector>

#include "dialeval/taskgen/example.h"

namespace dialeval {

// Dataset files, bAbI-dialog style:
//
//   <split>.txt       lines "n user_text\treply_text", n restarting at 1 for
//                     each dialog block; gold answer sets joined by '|'.
//   <split>.meta.tsv  one row per example:
//                     first \t last \t task \t class \t position \t dialog \t candidates
//                     lines first..last-1 are the context, line `last` the
//                     exchange to predict; class is "-" when absent;
//                     candidates is "entities", "gold" or "pool:<name>".
//   candidates_<name>.txt  one response per line.
void WriteSplit(const std::string& dir, const std::string& split,
                const std::vector<Example>& examples);
std::vector<Example> ReadSplit(const std::string& dir, const std::string& split);

void WritePool(const std::string& dir, const std::string& name,
               const std::vector<std::string>& pool);
std::vector<std::string> ReadPool(const std::string& dir, const std::string& name);

}  // namespace dialeval

#endif  // DIALEVAL_TASKGEN_DATASET_IO_H_
