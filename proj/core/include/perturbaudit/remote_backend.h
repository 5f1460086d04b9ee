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

#ifndef PERTURBAUDIT_REMOTE_BACKEND_H_
#define PERTURBAUDIT_REMOTE_BACKEND_H_

#include <span>
#include <string>
#include <vector>

#include "perturbaudit/embedding.h"
#include "perturbaudit/prediction.h"

namespace perturbaudit {

inline constexpr char kModelUrlEnv[] = "PERTURBAUDIT_MODEL_URL";

struct RemoteOptions {
  // e.g. "http://localhost:8000" or "http://host:8000/prefix".
  std::string base_url;
  // Optional "Name: value" header sent with every request.
  std::string auth_header;
  double timeout_seconds = 60.0;
  int max_in_flight = 8;
  int batch_size = 32;
  int max_attempts = 3;
  double backoff_base_seconds = 0.5;
};

struct HealthStatus {
  std::string status;
  std::string model;
};

// HTTP/JSON client for an external classifier:
//   POST /predict {"texts": [...]}
//     -> {"logits": [[d, a], ...], "label_order": ["dismissal", "approval"]}
//   POST /embed   {"texts": [...]} -> {"embeddings": [[[f, ...], ...], ...]}
//   GET  /health  -> {"status": "ok", "model": "<name>"}
// Texts are split into batches sent with up to max_in_flight concurrent
// requests; results are reassembled in input order. Connection failures and
// 5xx responses are retried with exponential backoff, then surface as
// BackendUnreachable; malformed responses and 4xx are ProtocolError.
class RemoteBackend : public Backend, public TokenEmbedder {
 public:
  explicit RemoteBackend(RemoteOptions options);

  std::vector<Logits> Score(std::span<const std::string> texts) override;
  std::vector<TokenEmbeddings> Embed(
      std::span<const std::string> texts) override;
  HealthStatus Health();

  std::string name() const override;
  const RemoteOptions& options() const { return options_; }

 private:
  RemoteOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_REMOTE_BACKEND_H_
