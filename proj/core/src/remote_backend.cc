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

#include "perturbaudit/remote_backend.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

using nlohmann::json;

std::unique_ptr<httplib::Client> MakeClient(const std::string& origin,
                                            const RemoteOptions& options) {
  auto client = std::make_unique<httplib::Client>(origin);
  const auto timeout = std::chrono::duration<double>(options.timeout_seconds);
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client->set_connection_timeout(micros);
  client->set_read_timeout(micros);
  client->set_write_timeout(micros);
  client->set_keep_alive(true);
  if (!options.auth_header.empty()) {
    const auto colon = options.auth_header.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kConfig, "auth header must look like 'Name: value'");
    }
    std::string value = options.auth_header.substr(colon + 1);
    value.erase(0, value.find_first_not_of(' '));
    client->set_default_headers(
        {{options.auth_header.substr(0, colon), std::move(value)}});
  }
  return client;
}

// Issues `send` up to max_attempts times. Connection failures and 5xx are
// retried; anything else that is not a 200 is a protocol error.
template <typename Send>
json RequestWithRetry(const RemoteOptions& options, const std::string& what,
                      Send&& send) {
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, options.max_attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(
          options.backoff_base_seconds * std::pow(2.0, attempt - 1)));
    }
    httplib::Result result = send();
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status != 200) {
      throw Error(ErrorCode::kProtocolError,
                  what + ": HTTP " + std::to_string(result->status) + ": " +
                      result->body.substr(0, 200));
    }
    try {
      return json::parse(result->body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kProtocolError,
                  what + ": response is not JSON: " + e.what());
    }
  }
  throw Error(ErrorCode::kBackendUnreachable,
              what + " failed after " + std::to_string(options.max_attempts) +
                  " attempts: " + last_error);
}

double Number(const json& value, const std::string& what) {
  if (!value.is_number()) {
    throw Error(ErrorCode::kProtocolError, what + ": expected a number");
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kNonFiniteLogit, what);
  }
  return x;
}

std::vector<Logits> DecodePredict(const json& body, size_t expected) {
  auto order = body.find("label_order");
  if (order == body.end()) {
    throw Error(ErrorCode::kProtocolError, "/predict: missing label_order");
  }
  bool swapped = false;
  if (*order == json::array({"dismissal", "approval"})) {
    swapped = false;
  } else if (*order == json::array({"approval", "dismissal"})) {
    swapped = true;
  } else {
    throw Error(ErrorCode::kProtocolError,
                "/predict: unsupported label_order " + order->dump());
  }
  auto logits = body.find("logits");
  if (logits == body.end() || !logits->is_array() ||
      logits->size() != expected) {
    throw Error(ErrorCode::kProtocolError,
                "/predict: expected " + std::to_string(expected) + " logit rows");
  }
  std::vector<Logits> out;
  out.reserve(expected);
  for (const json& row : *logits) {
    if (!row.is_array() || row.size() != 2) {
      throw Error(ErrorCode::kProtocolError,
                  "/predict: each logit row must have two entries");
    }
    const double first = Number(row[0], "/predict logit");
    const double second = Number(row[1], "/predict logit");
    out.push_back(swapped ? Logits{second, first} : Logits{first, second});
  }
  return out;
}

std::vector<TokenEmbeddings> DecodeEmbed(const json& body, size_t expected) {
  auto embeddings = body.find("embeddings");
  if (embeddings == body.end() || !embeddings->is_array() ||
      embeddings->size() != expected) {
    throw Error(ErrorCode::kProtocolError,
                "/embed: expected " + std::to_string(expected) + " entries");
  }
  std::vector<TokenEmbeddings> out;
  out.reserve(expected);
  for (const json& text : *embeddings) {
    if (!text.is_array()) {
      throw Error(ErrorCode::kProtocolError, "/embed: entry must be an array");
    }
    TokenEmbeddings tokens;
    for (const json& vec : text) {
      if (!vec.is_array()) {
        throw Error(ErrorCode::kProtocolError, "/embed: vector must be an array");
      }
      Vector v;
      v.reserve(vec.size());
      for (const json& x : vec) v.push_back(Number(x, "/embed value"));
      tokens.push_back(std::move(v));
    }
    out.push_back(std::move(tokens));
  }
  return out;
}

// Splits texts into batches and runs `call(client, batch)` with up to
// max_in_flight workers, each owning one connection.
template <typename T, typename Call>
std::vector<T> RunBatched(std::span<const std::string> texts,
                          const std::string& origin,
                          const RemoteOptions& options, Call&& call) {
  const size_t batch_size = std::max(1, options.batch_size);
  const size_t num_batches = (texts.size() + batch_size - 1) / batch_size;
  std::vector<std::vector<T>> results(num_batches);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    try {
      auto client = MakeClient(origin, options);
      while (!failed.load()) {
        const size_t b = next.fetch_add(1);
        if (b >= num_batches) break;
        const size_t begin = b * batch_size;
        const size_t count = std::min(batch_size, texts.size() - begin);
        results[b] = call(*client, texts.subspan(begin, count));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      failed.store(true);
    }
  };

  const size_t workers = std::min<size_t>(
      std::max(1, options.max_in_flight), num_batches);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<T> out;
  out.reserve(texts.size());
  for (auto& batch : results) {
    std::move(batch.begin(), batch.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteOptions options)
    : options_(std::move(options)) {
  const std::string& url = options_.base_url;
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw Error(ErrorCode::kConfig,
                "backend URL must look like http://host:port, got '" + url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  scheme_host_port_ = url.substr(0, slash);
  if (slash != std::string::npos) path_prefix_ = url.substr(slash);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') {
    path_prefix_.pop_back();
  }
}

std::string RemoteBackend::name() const { return "remote:" + options_.base_url; }

std::vector<Logits> RemoteBackend::Score(std::span<const std::string> texts) {
  if (texts.empty()) return {};
  const std::string path = path_prefix_ + "/predict";
  return RunBatched<Logits>(
      texts, scheme_host_port_, options_,
      [&](httplib::Client& client, std::span<const std::string> batch) {
        const std::string body =
            json{{"texts", std::vector<std::string>(batch.begin(), batch.end())}}
                .dump();
        const json response = RequestWithRetry(options_, "POST /predict", [&] {
          return client.Post(path, body, "application/json");
        });
        return DecodePredict(response, batch.size());
      });
}

std::vector<TokenEmbeddings> RemoteBackend::Embed(
    std::span<const std::string> texts) {
  if (texts.empty()) return {};
  const std::string path = path_prefix_ + "/embed";
  return RunBatched<TokenEmbeddings>(
      texts, scheme_host_port_, options_,
      [&](httplib::Client& client, std::span<const std::string> batch) {
        const std::string body =
            json{{"texts", std::vector<std::string>(batch.begin(), batch.end())}}
                .dump();
        const json response = RequestWithRetry(options_, "POST /embed", [&] {
          return client.Post(path, body, "application/json");
        });
        return DecodeEmbed(response, batch.size());
      });
}

HealthStatus RemoteBackend::Health() {
  auto client = MakeClient(scheme_host_port_, options_);
  const std::string path = path_prefix_ + "/health";
  const json body = RequestWithRetry(options_, "GET /health",
                                     [&] { return client->Get(path); });
  HealthStatus status;
  if (!body.is_object() || !body.contains("status") ||
      !body["status"].is_string()) {
    throw Error(ErrorCode::kProtocolError, "/health: missing status");
  }
  status.status = body["status"].get<std::string>();
  if (body.contains("model") && body["model"].is_string()) {
    status.model = body["model"].get<std::string>();
  }
  if (status.status != "ok") {
    throw Error(ErrorCode::kBackendUnreachable,
                "/health reported status '" + status.status + "'");
  }
  return status;
}

}  // namespace perturbaudit
