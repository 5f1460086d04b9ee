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

#include "perturbaudit/corpus.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "perturbaudit/error.h"
#include "perturbaudit/text.h"

namespace perturbaudit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Thrown internally while decoding one line; rewrapped with the line number.
struct FieldError {
  std::string message;
};

const json& Require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError{std::string("missing field '") + key + "'"};
  return *it;
}

std::string RequireString(const json& obj, const char* key) {
  const json& v = Require(obj, key);
  if (!v.is_string()) {
    throw FieldError{std::string("field '") + key + "' must be a string"};
  }
  return v.get<std::string>();
}

int64_t RequireInt(const json& obj, const char* key) {
  const json& v = Require(obj, key);
  if (!v.is_number_integer()) {
    throw FieldError{std::string("field '") + key + "' must be an integer"};
  }
  return v.get<int64_t>();
}

Judgment DecodeJudgment(const json& v) {
  if (v.is_number_integer()) {
    const auto n = v.get<int64_t>();
    if (n == 0) return Judgment::kDismissal;
    if (n == 1) return Judgment::kApproval;
  } else if (v.is_string()) {
    if (auto j = ParseJudgment(v.get<std::string>())) return *j;
  }
  throw FieldError{"field 'judgment' must be 0, 1, \"dismissal\" or \"approval\""};
}

Case DecodeCase(const json& obj) {
  if (!obj.is_object()) throw FieldError{"line is not a JSON object"};
  Case c;
  c.case_id = RequireString(obj, "case_id");
  const std::string lang = RequireString(obj, "language");
  auto language = ParseLanguage(lang);
  if (!language) throw FieldError{"unknown language '" + lang + "'"};
  c.language = *language;
  c.year = static_cast<int>(RequireInt(obj, "year"));
  c.legal_area = RequireString(obj, "legal_area");
  c.judgment = DecodeJudgment(Require(obj, "judgment"));
  c.facts = RequireString(obj, "facts");
  if (auto it = obj.find("annotator"); it != obj.end()) {
    if (!it->is_string()) throw FieldError{"field 'annotator' must be a string"};
    c.annotator = it->get<std::string>();
  }
  const json& spans = Require(obj, "spans");
  if (!spans.is_array()) throw FieldError{"field 'spans' must be an array"};
  for (const json& s : spans) {
    if (!s.is_object()) throw FieldError{"span is not an object"};
    Span span;
    span.start = RequireInt(s, "start");
    span.end = RequireInt(s, "end");
    const std::string label = RequireString(s, "label");
    auto parsed = ParseSpanLabel(label);
    if (!parsed) throw FieldError{"unknown span label '" + label + "'"};
    span.label = *parsed;
    if (auto it = s.find("text"); it != s.end()) {
      if (!it->is_string()) throw FieldError{"span 'text' must be a string"};
      span.text = it->get<std::string>();
    }
    c.spans.push_back(std::move(span));
  }
  return c;
}

}  // namespace

void ValidateCase(Case& c) {
  std::stable_sort(c.spans.begin(), c.spans.end(),
                   [](const Span& a, const Span& b) { return a.start < b.start; });
  const std::u32string facts = utf8::Decode(c.facts);
  const auto length = static_cast<int64_t>(facts.size());
  int64_t previous_end = 0;
  for (size_t i = 0; i < c.spans.size(); ++i) {
    Span& span = c.spans[i];
    if (span.start < 0 || span.start >= span.end || span.end > length) {
      throw Error(ErrorCode::kOffsetMismatch,
                  c.case_id + ": span [" + std::to_string(span.start) + ", " +
                      std::to_string(span.end) + ") outside facts of length " +
                      std::to_string(length));
    }
    if (i > 0 && span.start < previous_end) {
      throw Error(ErrorCode::kOverlappingSpans,
                  c.case_id + ": span starting at " + std::to_string(span.start) +
                      " overlaps the previous span");
    }
    previous_end = span.end;
    const std::string actual = utf8::Encode(std::u32string_view(facts).substr(
        span.start, span.end - span.start));
    if (span.text.empty()) {
      span.text = actual;
    } else if (span.text != actual) {
      throw Error(ErrorCode::kOffsetMismatch,
                  c.case_id + ": span text does not match facts at [" +
                      std::to_string(span.start) + ", " +
                      std::to_string(span.end) + ")");
    }
  }
}

std::vector<Case> ParseCorpus(std::istream& in) {
  std::vector<Case> cases;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Case c;
    try {
      c = DecodeCase(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const FieldError& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.message);
    }
    ValidateCase(c);
    if (!seen.emplace(c.annotator.value_or(""), c.case_id).second) {
      throw Error(ErrorCode::kDuplicateId, c.case_id);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<Case> ParseCorpus(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  return ParseCorpus(in);
}

std::string SerializeCase(const Case& c) {
  ordered_json obj;
  obj["case_id"] = c.case_id;
  if (c.annotator) obj["annotator"] = *c.annotator;
  obj["language"] = std::string(ToString(c.language));
  obj["year"] = c.year;
  obj["legal_area"] = c.legal_area;
  obj["judgment"] = ToIndex(c.judgment);
  obj["facts"] = c.facts;
  ordered_json spans = ordered_json::array();
  for (const Span& s : c.spans) {
    ordered_json span;
    span["start"] = s.start;
    span["end"] = s.end;
    span["label"] = std::string(ToString(s.label));
    spans.push_back(std::move(span));
  }
  obj["spans"] = std::move(spans);
  return obj.dump();
}

void WriteCorpus(std::ostream& out, std::span<const Case> cases) {
  for (const Case& c : cases) out << SerializeCase(c) << '\n';
}

std::string ReconstructFacts(const Case& c) {
  const std::u32string facts = utf8::Decode(c.facts);
  std::string out;
  int64_t cursor = 0;
  for (const Span& span : c.spans) {
    out += utf8::Encode(
        std::u32string_view(facts).substr(cursor, span.start - cursor));
    out += span.text;
    cursor = span.end;
  }
  out += utf8::Encode(std::u32string_view(facts).substr(cursor));
  return out;
}

CourtRegistry::CourtRegistry(std::map<Language, std::vector<std::string>> courts)
    : courts_(std::move(courts)) {
  for (auto& [language, names] : courts_) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  }
}

const std::vector<std::string>& CourtRegistry::Courts(Language language) const {
  static const std::vector<std::string> kEmpty;
  auto it = courts_.find(language);
  return it == courts_.end() ? kEmpty : it->second;
}

bool CourtRegistry::Covers(Language language) const {
  return !Courts(language).empty();
}

std::string CanonicalCourtName(std::string_view raw) {
  return CollapseWhitespace(raw);
}

CourtRegistry BuildCourtRegistry(std::span<const Case> corpus) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "corpus is empty");
  }
  std::map<Language, std::set<std::string>> names;
  for (const Case& c : corpus) {
    auto& bucket = names[c.language];
    for (const Span& span : c.spans) {
      if (span.label != SpanLabel::kLowerCourt) continue;
      std::string canonical = CanonicalCourtName(span.text);
      if (!canonical.empty()) bucket.insert(std::move(canonical));
    }
  }
  std::map<Language, std::vector<std::string>> courts;
  for (auto& [language, bucket] : names) {
    if (bucket.empty()) {
      throw Error(ErrorCode::kNoLowerCourts, std::string(ToString(language)));
    }
    courts[language].assign(bucket.begin(), bucket.end());
  }
  return CourtRegistry(std::move(courts));
}

std::string SerializeRegistry(const CourtRegistry& registry) {
  ordered_json obj = ordered_json::object();
  for (const auto& [language, names] : registry.all()) {
    obj[std::string(ToString(language))] = names;
  }
  return obj.dump(2) + "\n";
}

CourtRegistry ParseRegistry(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("registry: ") + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kSchemaMismatch, "registry must be a JSON object");
  }
  std::map<Language, std::vector<std::string>> courts;
  for (const auto& [key, value] : obj.items()) {
    auto language = ParseLanguage(key);
    if (!language || !value.is_array()) {
      throw Error(ErrorCode::kSchemaMismatch, "registry entry '" + key + "'");
    }
    for (const json& name : value) {
      if (!name.is_string()) {
        throw Error(ErrorCode::kSchemaMismatch, "registry entry '" + key + "'");
      }
      courts[*language].push_back(CanonicalCourtName(name.get<std::string>()));
    }
  }
  return CourtRegistry(std::move(courts));
}

}  // namespace perturbaudit
