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

#include "perturbaudit/published.h"

#include <algorithm>
#include <istream>
#include <optional>
#include <set>

#include "json.hpp"
#include "perturbaudit/error.h"
#include "perturbaudit/perturb.h"
#include "perturbaudit/text.h"

namespace perturbaudit {
namespace {

using nlohmann::json;

enum class RowLabel { kSupports, kOpposes, kNeutral, kBaseline, kLowerCourt };

RowLabel ParseRowLabel(const std::string& raw) {
  std::string key;
  for (char c : ToLower(raw)) {
    if (c != ' ' && c != '_' && c != '-') key.push_back(c);
  }
  for (const char* suffix : {"judgment", "judgement"}) {
    const std::string s(suffix);
    if (key.size() > s.size() && key.ends_with(s)) {
      key.resize(key.size() - s.size());
    }
  }
  if (key == "supports" || key == "support") return RowLabel::kSupports;
  if (key == "opposes" || key == "oppose") return RowLabel::kOpposes;
  if (key == "neutral") return RowLabel::kNeutral;
  if (key == "baseline" || key == "none") return RowLabel::kBaseline;
  if (key == "lowercourt") return RowLabel::kLowerCourt;
  throw Error(ErrorCode::kUnknownLabel, raw);
}

const json& Column(const json& row, const std::string& name) {
  auto it = row.find(name);
  if (it == row.end()) throw Error(ErrorCode::kSchemaMismatch, name);
  return *it;
}

std::string StringColumn(const json& row, const std::string& name) {
  const json& v = Column(row, name);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  throw Error(ErrorCode::kSchemaMismatch, name + " (expected string)");
}

Language LanguageColumn(const json& row, const std::string& name) {
  const std::string raw = ToLower(StringColumn(row, name));
  if (auto l = ParseLanguage(raw)) return *l;
  if (raw == "german") return Language::kDe;
  if (raw == "french") return Language::kFr;
  if (raw == "italian") return Language::kIt;
  throw Error(ErrorCode::kSchemaMismatch, name + " (unknown value '" + raw + "')");
}

Judgment JudgmentColumn(const json& row, const std::string& name) {
  const json& v = Column(row, name);
  if (v.is_number_integer()) {
    const auto n = v.get<int64_t>();
    if (n == 0 || n == 1) return static_cast<Judgment>(n);
  } else if (v.is_string()) {
    if (auto j = ParseJudgment(ToLower(v.get<std::string>()))) return *j;
  }
  throw Error(ErrorCode::kUnknownLabel, name + "=" + v.dump());
}

int YearColumn(const json& row, const std::string& name) {
  const json& v = Column(row, name);
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    try {
      return std::stoi(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::kSchemaMismatch, name + " (expected integer)");
}

template <typename Fn>
void ForEachRow(std::istream& in, Fn&& fn) {
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!row.is_object()) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": not an object");
    }
    fn(row, line_no);
  }
}

struct CaseDraft {
  Case c;
  bool have_facts = false;
  std::vector<Span> candidates;
};

// Unique occurrence of `needle` in `facts` as a code-point range.
std::optional<std::pair<int64_t, int64_t>> FindUnique(
    const std::u32string& facts, const std::u32string& needle) {
  if (needle.empty()) return std::nullopt;
  const auto first = facts.find(needle);
  if (first == std::u32string::npos) return std::nullopt;
  if (facts.find(needle, first + 1) != std::u32string::npos) return std::nullopt;
  return std::make_pair(static_cast<int64_t>(first),
                        static_cast<int64_t>(first + needle.size()));
}

}  // namespace

int64_t PublishedCounts::Occlusion(Language language, int set_k,
                                   Rationale label) const {
  auto it = occlusion.find({language, set_k, label});
  return it == occlusion.end() ? 0 : it->second;
}

int64_t PublishedCounts::OcclusionLabelTotal(Language language,
                                             Rationale label) const {
  int64_t total = 0;
  for (const auto& [key, count] : occlusion) {
    if (std::get<0>(key) == language && std::get<2>(key) == label) {
      total += count;
    }
  }
  return total;
}

int64_t PublishedCounts::OcclusionTotal(Language language) const {
  int64_t total = 0;
  for (Rationale label : kRationales) {
    total += OcclusionLabelTotal(language, label);
  }
  return total;
}

int64_t PublishedCounts::Lci(Language language) const {
  auto it = lci.find(language);
  return it == lci.end() ? 0 : it->second;
}

int64_t PublishedCounts::LciGrandTotal() const {
  int64_t total = 0;
  for (const auto& [language, count] : lci) total += count;
  return total;
}

ImportResult ImportPublished(std::span<const OcclusionSource> occlusion,
                             std::istream* lci,
                             const PublishedColumns& columns) {
  ImportResult result;
  std::map<std::string, CaseDraft> drafts;
  std::map<Language, std::set<std::string>> documents;
  std::set<std::string> occlusion_baselines;

  auto draft_for = [&](const json& row) -> CaseDraft& {
    const std::string id = StringColumn(row, columns.id);
    CaseDraft& d = drafts[id];
    if (d.c.case_id.empty()) {
      d.c.case_id = id;
      d.c.language = LanguageColumn(row, columns.language);
      d.c.year = YearColumn(row, columns.year);
      d.c.legal_area = StringColumn(row, columns.legal_area);
      d.c.judgment = JudgmentColumn(row, columns.judgment);
    }
    return d;
  };

  for (const OcclusionSource& source : occlusion) {
    if (source.rows == nullptr) continue;
    ForEachRow(*source.rows, [&](const json& row, int64_t line_no) {
      const RowLabel label =
          ParseRowLabel(StringColumn(row, columns.explainability_label));
      CaseDraft& draft = draft_for(row);
      const std::string text = StringColumn(row, columns.text);
      const std::string occluded = StringColumn(row, columns.occluded_text);
      documents[draft.c.language].insert(draft.c.case_id);

      PerturbedInstance p;
      p.case_id = draft.c.case_id;
      p.language = draft.c.language;
      p.judgment = draft.c.judgment;
      p.text = text;
      p.baseline_id = BaselineId(draft.c.case_id);
      if (label == RowLabel::kBaseline) {
        p.kind = InstanceKind::kBaseline;
        p.instance_id = p.baseline_id;
        ++result.counts.occlusion_baselines[draft.c.language];
        if (!draft.have_facts) {
          draft.c.facts = text;
          draft.have_facts = true;
        }
      } else if (label == RowLabel::kLowerCourt) {
        throw Error(ErrorCode::kUnknownLabel,
                    "lower court label in occlusion set, line " +
                        std::to_string(line_no));
      } else {
        const Rationale r = label == RowLabel::kSupports  ? Rationale::kSupports
                            : label == RowLabel::kOpposes ? Rationale::kOpposes
                                                          : Rationale::kNeutral;
        p.kind = InstanceKind::kOcclusion;
        p.set_k = source.set_k;
        p.perturbed_label = r;
        p.instance_id = draft.c.case_id + "#pub-occ-k" +
                        std::to_string(source.set_k) + "-" +
                        std::to_string(line_no);
        ++result.counts.occlusion[{draft.c.language, source.set_k, r}];
        if (source.set_k == 1 && !occluded.empty()) {
          draft.candidates.push_back(Span{occluded, ToSpanLabel(r), 0, 0});
        }
      }
      if (p.kind != InstanceKind::kBaseline ||
          occlusion_baselines.insert(p.case_id).second) {
        result.occlusion_instances.push_back(std::move(p));
      }
    });
  }

  if (lci != nullptr) {
    std::set<std::string> lci_baselines;
    std::map<std::string, int64_t> replacement_index;
    ForEachRow(*lci, [&](const json& row, int64_t) {
      const RowLabel label =
          ParseRowLabel(StringColumn(row, columns.explainability_label));
      CaseDraft& draft = draft_for(row);
      const std::string text = StringColumn(row, columns.text);
      const std::string court =
          CanonicalCourtName(StringColumn(row, columns.lower_court));
      ++result.counts.lci[draft.c.language];

      PerturbedInstance p;
      p.case_id = draft.c.case_id;
      p.language = draft.c.language;
      p.judgment = draft.c.judgment;
      p.text = text;
      p.baseline_id = BaselineId(draft.c.case_id);
      if (label == RowLabel::kBaseline) {
        p.kind = InstanceKind::kBaseline;
        p.instance_id = p.baseline_id;
        ++result.counts.lci_baselines[draft.c.language];
        if (!draft.have_facts) {
          draft.c.facts = text;
          draft.have_facts = true;
        }
        if (!court.empty()) {
          draft.candidates.push_back(Span{court, SpanLabel::kLowerCourt, 0, 0});
        }
      } else {
        p.kind = InstanceKind::kLci;
        p.inserted_court = court;
        p.instance_id = draft.c.case_id + "#pub-lci-" +
                        std::to_string(replacement_index[draft.c.case_id]++);
      }
      if (p.kind != InstanceKind::kBaseline ||
          lci_baselines.insert(p.case_id).second) {
        result.lci_instances.push_back(std::move(p));
      }
    });
  }

  for (auto& [language, ids] : documents) {
    result.counts.documents[language] = static_cast<int64_t>(ids.size());
  }

  for (auto& [id, draft] : drafts) {
    Case c = std::move(draft.c);
    const std::u32string facts = utf8::Decode(c.facts);
    std::vector<Span> spans;
    for (const Span& candidate : draft.candidates) {
      auto range = FindUnique(facts, utf8::Decode(candidate.text));
      if (!range) continue;
      const bool overlaps = std::any_of(spans.begin(), spans.end(), [&](const Span& s) {
        return range->first < s.end && s.start < range->second;
      });
      if (overlaps) continue;
      spans.push_back(Span{candidate.text, candidate.label, range->first,
                           range->second});
    }
    c.spans = std::move(spans);
    ValidateCase(c);
    result.cases.push_back(std::move(c));
  }
  // Original court of each LCI instance, from its case's recovered spans.
  std::map<std::string, std::string> original_court;
  for (const Case& c : result.cases) {
    for (const Span& s : c.spans) {
      if (s.label == SpanLabel::kLowerCourt) {
        original_court.emplace(c.case_id, CanonicalCourtName(s.text));
      }
    }
  }
  for (PerturbedInstance& p : result.lci_instances) {
    if (p.kind != InstanceKind::kLci) continue;
    auto it = original_court.find(p.case_id);
    if (it != original_court.end()) p.original_court = it->second;
  }
  return result;
}

std::string SerializeCounts(const PublishedCounts& counts) {
  nlohmann::ordered_json obj;
  for (Language language : kLanguages) {
    nlohmann::ordered_json lang;
    lang["documents"] = counts.documents.count(language)
                            ? counts.documents.at(language)
                            : 0;
    nlohmann::ordered_json sets = nlohmann::ordered_json::object();
    for (int set_k = 1; set_k <= 4; ++set_k) {
      nlohmann::ordered_json cell;
      for (Rationale label : kRationales) {
        cell[std::string(ToString(label))] =
            counts.Occlusion(language, set_k, label);
      }
      sets[std::to_string(set_k)] = std::move(cell);
    }
    lang["occlusion_sets"] = std::move(sets);
    nlohmann::ordered_json totals;
    for (Rationale label : kRationales) {
      totals[std::string(ToString(label))] =
          counts.OcclusionLabelTotal(language, label);
    }
    totals["total"] = counts.OcclusionTotal(language);
    lang["occlusion_totals"] = std::move(totals);
    lang["lci_total"] = counts.Lci(language);
    obj[std::string(ToString(language))] = std::move(lang);
  }
  obj["lci_grand_total"] = counts.LciGrandTotal();
  return obj.dump(2) + "\n";
}

}  // namespace perturbaudit
