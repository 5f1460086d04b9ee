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

#include "perturbaudit/instance.h"

#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "perturbaudit/error.h"

namespace perturbaudit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw std::invalid_argument(std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

PerturbedInstance Decode(const json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("line is not an object");
  PerturbedInstance p;
  p.instance_id = Field(obj, "instance_id");
  p.case_id = Field(obj, "case_id");
  auto kind = ParseInstanceKind(Field(obj, "kind"));
  if (!kind) throw std::invalid_argument("unknown kind");
  p.kind = *kind;
  auto language = ParseLanguage(Field(obj, "language"));
  if (!language) throw std::invalid_argument("unknown language");
  p.language = *language;
  const int judgment = obj.at("judgment").get<int>();
  if (judgment != 0 && judgment != 1) {
    throw std::invalid_argument("judgment must be 0 or 1");
  }
  p.judgment = static_cast<Judgment>(judgment);
  if (p.kind == InstanceKind::kOcclusion) {
    p.set_k = obj.at("set_k").get<int>();
    auto label = ParseRationale(Field(obj, "perturbed_label"));
    if (!label) throw std::invalid_argument("unknown perturbed_label");
    p.perturbed_label = *label;
    p.occluded_span_indices =
        obj.at("occluded_span_indices").get<std::vector<int>>();
  }
  if (p.kind == InstanceKind::kLci) {
    p.inserted_court = Field(obj, "inserted_court");
    p.original_court = Field(obj, "original_court");
  }
  p.text = Field(obj, "text");
  p.baseline_id = Field(obj, "baseline_id");
  return p;
}

}  // namespace

std::string_view ToString(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kBaseline: return "baseline";
    case InstanceKind::kOcclusion: return "occlusion";
    case InstanceKind::kLci: return "lci";
  }
  return "";
}

std::optional<InstanceKind> ParseInstanceKind(std::string_view text) {
  if (text == "baseline") return InstanceKind::kBaseline;
  if (text == "occlusion") return InstanceKind::kOcclusion;
  if (text == "lci") return InstanceKind::kLci;
  return std::nullopt;
}

std::string SerializeInstance(const PerturbedInstance& p) {
  ordered_json obj;
  obj["instance_id"] = p.instance_id;
  obj["case_id"] = p.case_id;
  obj["kind"] = std::string(ToString(p.kind));
  obj["language"] = std::string(ToString(p.language));
  obj["judgment"] = ToIndex(p.judgment);
  if (p.kind == InstanceKind::kOcclusion) {
    obj["set_k"] = p.set_k;
    obj["perturbed_label"] =
        std::string(ToString(p.perturbed_label.value_or(Rationale::kNeutral)));
    obj["occluded_span_indices"] = p.occluded_span_indices;
  }
  if (p.kind == InstanceKind::kLci) {
    obj["inserted_court"] = p.inserted_court;
    obj["original_court"] = p.original_court;
  }
  obj["text"] = p.text;
  obj["baseline_id"] = p.baseline_id;
  return obj.dump();
}

void WriteInstances(std::ostream& out,
                    std::span<const PerturbedInstance> instances) {
  for (const auto& p : instances) out << SerializeInstance(p) << '\n';
}

std::vector<PerturbedInstance> ParseInstances(std::istream& in) {
  std::vector<PerturbedInstance> out;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Decode(json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<PerturbedInstance> ParseInstances(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  return ParseInstances(in);
}

}  // namespace perturbaudit
