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

#ifndef PERTURBAUDIT_TESTS_FAKE_MODEL_SERVER_H_
#define PERTURBAUDIT_TESTS_FAKE_MODEL_SERVER_H_

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace perturbaudit::testing {

// In-process HTTP model service speaking the /predict, /embed, /health
// protocol with reference-classifier semantics and injectable faults.
class FakeModelServer {
 public:
  struct Behavior {
    std::map<std::string, double> weights;
    double bias = 0.0;
    // 503 for the first N /predict requests.
    int fail_first = 0;
    // Non-zero: every /predict answers with this status.
    int predict_status = 0;
    bool malformed_json = false;
    bool reversed_label_order = false;
    bool omit_label_order = false;
    bool drop_last_row = false;
    bool non_finite = false;
    int embed_status = 200;
    std::string required_auth_header;  // "Name: value"
    std::string health_status = "ok";
  };

  explicit FakeModelServer(Behavior behavior);
  ~FakeModelServer();
  FakeModelServer(const FakeModelServer&) = delete;
  FakeModelServer& operator=(const FakeModelServer&) = delete;

  std::string url() const;
  int predict_requests() const { return predict_requests_.load(); }
  int max_batch() const { return max_batch_.load(); }
  int max_concurrent() const { return max_concurrent_.load(); }

  // Deterministic unit vector for a token, shared with tests.
  static std::vector<double> TokenVector(const std::string& token);

 private:
  Behavior behavior_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> predict_requests_{0};
  std::atomic<int> max_batch_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_concurrent_{0};
};

}  // namespace perturbaudit::testing

#endif  // PERTURBAUDIT_TESTS_FAKE_MODEL_SERVER_H_
