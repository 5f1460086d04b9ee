// Copyright 2026 The PerturbAudit Authors.
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

#ifndef PERTURBAUDIT_EMBEDDING_H_
#define PERTURBAUDIT_EMBEDDING_H_

#include <span>
#include <string>
#include <vector>

namespace perturbaudit {

using Vector = std::vector<double>;
// One vector per content token of a text.
using TokenEmbeddings = std::vector<Vector>;

class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  // One entry per input text, in order. Throws Error with a backend code when
  // the provider cannot be reached.
  virtual std::vector<TokenEmbeddings> Embed(
      std::span<const std::string> texts) = 0;
};

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_EMBEDDING_H_
