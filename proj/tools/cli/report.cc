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

#include "report.h"

#include <optional>

#include <fmt/format.h>

#include "json.hpp"

namespace perturbaudit::cli {
namespace {

using nlohmann::ordered_json;

constexpr char kEmpty[] = "-";
constexpr int kMaxSet = 4;

// Column order of the published tables.
constexpr Rationale kColumns[] = {Rationale::kOpposes, Rationale::kNeutral,
                                  Rationale::kSupports};

std::string Fixed(std::optional<double> v) {
  return v ? fmt::format("{:.2f}", *v) : std::string(kEmpty);
}

std::string CsvField(std::optional<double> v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

ordered_json JsonNumber(std::optional<double> v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string MarkdownRow(const std::vector<std::string>& cells) {
  std::string row = "|";
  for (const auto& c : cells) row += " " + c + " |";
  return row + "\n";
}

std::string MarkdownRule(size_t n) {
  std::string row = "|";
  for (size_t i = 0; i < n; ++i) row += i == 0 ? " --- |" : " ---: |";
  return row + "\n";
}

std::optional<double> F1Percent(const OcclusionGroup* group, Rationale label) {
  if (group == nullptr) return std::nullopt;
  auto it = group->cells.find(label);
  if (it == group->cells.end()) return std::nullopt;
  return 100.0 * it->second.f1;
}

std::string SetName(int set_k) {
  return set_k == 0 ? "all" : std::to_string(set_k);
}

}  // namespace

Rendered RenderOcclusion(const OcclusionReport& report,
                         const std::string& model) {
  Rendered out;
  out.csv =
      "model,language,set,label,f1,tp,fp,fn,gold_count,assigned_count,"
      "num_records\n";
  ordered_json groups = ordered_json::array();
  for (const OcclusionGroup& g : report.groups) {
    ordered_json cells = ordered_json::object();
    for (Rationale label : kColumns) {
      auto it = g.cells.find(label);
      if (it == g.cells.end()) {
        out.csv += fmt::format("{},{},{},{},,,,,,,{}\n", CsvQuote(model),
                               ToString(g.language), SetName(g.set_k),
                               ToString(label), g.num_records);
        cells[std::string(ToString(label))] = nullptr;
        continue;
      }
      const F1Cell& c = it->second;
      out.csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n",
                             CsvQuote(model), ToString(g.language),
                             SetName(g.set_k), ToString(label),
                             CsvField(100.0 * c.f1), c.counts.tp, c.counts.fp,
                             c.counts.fn, c.gold_count, c.assigned_count,
                             g.num_records);
      cells[std::string(ToString(label))] = {
          {"f1", 100.0 * c.f1},       {"tp", c.counts.tp},
          {"fp", c.counts.fp},        {"fn", c.counts.fn},
          {"gold_count", c.gold_count}, {"assigned_count", c.assigned_count}};
    }
    groups.push_back({{"language", std::string(ToString(g.language))},
                      {"set", SetName(g.set_k)},
                      {"num_records", g.num_records},
                      {"macro_f1", JsonNumber(g.macro_f1 ? std::optional<double>(
                                                               100.0 * *g.macro_f1)
                                                         : std::nullopt)},
                      {"cells", std::move(cells)}});
  }
  ordered_json doc;
  doc["model"] = model;
  doc["unit"] = "f1 x 100";
  doc["groups"] = std::move(groups);
  out.json = doc.dump(2) + "\n";

  std::string& md = out.markdown;
  md += "## Occlusion: label-wise F1 over all sets\n\n";
  std::vector<std::string> header = {"Model"};
  for (Language language : kLanguages) {
    for (Rationale label : kColumns) {
      header.push_back(fmt::format("{} {}", LanguageName(language),
                                   DisplayName(label)));
    }
  }
  md += MarkdownRow(header) + MarkdownRule(header.size());
  std::vector<std::string> row = {model};
  for (Language language : kLanguages) {
    const OcclusionGroup* g = report.Find(language, 0);
    for (Rationale label : kColumns) row.push_back(Fixed(F1Percent(g, label)));
  }
  md += MarkdownRow(row);

  for (Language language : kLanguages) {
    md += fmt::format("\n## Occlusion: {} per set\n\n", LanguageName(language));
    std::vector<std::string> set_header = {"Model"};
    for (int k = 1; k <= kMaxSet; ++k) {
      for (Rationale label : kColumns) {
        set_header.push_back(fmt::format("Set {} {}", k, DisplayName(label)));
      }
    }
    md += MarkdownRow(set_header) + MarkdownRule(set_header.size());
    std::vector<std::string> set_row = {model};
    for (int k = 1; k <= kMaxSet; ++k) {
      const OcclusionGroup* g = report.Find(language, k);
      for (Rationale label : kColumns) {
        set_row.push_back(Fixed(F1Percent(g, label)));
      }
    }
    md += MarkdownRow(set_row);
  }
  return out;
}

Rendered RenderBias(const BiasReport& report, const std::string& model) {
  Rendered out;
  out.csv =
      "model,language,mes_plus,std_plus,n_plus,mes_minus,std_minus,n_minus,"
      "n_zero,flip_1_to_0,flip_0_to_1,flips_1_to_0,flips_0_to_1,num_records\n";
  ordered_json rows = ordered_json::array();
  for (const BiasRow& r : report.rows) {
    const MesStats& m = r.mes;
    const FlipRates& f = r.flips;
    out.csv += fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", CsvQuote(model),
        ToString(r.language), CsvField(m.mes_plus), CsvField(m.std_plus),
        m.n_plus, CsvField(m.mes_minus), CsvField(m.std_minus), m.n_minus,
        m.n_zero, CsvField(f.one_to_zero), CsvField(f.zero_to_one),
        f.flips_one_to_zero, f.flips_zero_to_one, f.num_records);
    rows.push_back({{"language", std::string(ToString(r.language))},
                    {"mes_plus", JsonNumber(m.mes_plus)},
                    {"std_plus", JsonNumber(m.std_plus)},
                    {"n_plus", m.n_plus},
                    {"mes_minus", JsonNumber(m.mes_minus)},
                    {"std_minus", JsonNumber(m.std_minus)},
                    {"n_minus", m.n_minus},
                    {"n_zero", m.n_zero},
                    {"flip_1_to_0", f.one_to_zero},
                    {"flip_0_to_1", f.zero_to_one},
                    {"flips_1_to_0", f.flips_one_to_zero},
                    {"flips_0_to_1", f.flips_zero_to_one},
                    {"num_records", f.num_records}});
  }
  ordered_json doc;
  doc["model"] = model;
  doc["unit"] = "percent";
  doc["rows"] = std::move(rows);
  out.json = doc.dump(2) + "\n";

  auto with_std = [](std::optional<double> mean, std::optional<double> sd) {
    if (!mean) return std::string(kEmpty);
    return fmt::format("{:.2f} ({:.2f})", *mean, sd.value_or(0.0));
  };
  std::string& md = out.markdown;
  md += "## Lower court insertion: MES (std) and label flips\n\n";
  std::vector<std::string> header = {"Model"};
  for (Language language : kLanguages) {
    const auto name = LanguageName(language);
    header.push_back(fmt::format("{} +MES", name));
    header.push_back(fmt::format("{} -MES", name));
    header.push_back(fmt::format("{} Flip 1→0", name));
    header.push_back(fmt::format("{} Flip 0→1", name));
  }
  md += MarkdownRow(header) + MarkdownRule(header.size());
  std::vector<std::string> row = {model};
  for (Language language : kLanguages) {
    const BiasRow* r = report.Find(language);
    if (r == nullptr) {
      row.insert(row.end(), 4, kEmpty);
      continue;
    }
    row.push_back(with_std(r->mes.mes_plus, r->mes.std_plus));
    row.push_back(with_std(r->mes.mes_minus, r->mes.std_minus));
    row.push_back(Fixed(r->flips.one_to_zero));
    row.push_back(Fixed(r->flips.zero_to_one));
  }
  md += MarkdownRow(row);
  return out;
}

Rendered RenderAgreement(const AgreementReport& report) {
  Rendered out;
  out.json = SerializeAgreement(report);
  out.csv = "annotator_a,annotator_b,metric,score,num_cells,num_cases\n";
  for (const PairAgreement& p : report.pairs) {
    for (AgreementMetric metric : kAgreementMetrics) {
      auto it = p.scores.find(metric);
      out.csv += fmt::format(
          "{},{},{},{},{},{}\n", CsvQuote(p.annotator_a),
          CsvQuote(p.annotator_b), ToString(metric),
          CsvField(it == p.scores.end() ? std::nullopt
                                        : std::optional<double>(it->second)),
          p.num_cells, p.num_cases);
    }
  }

  std::string& md = out.markdown;
  md += "## Inter-annotator agreement\n\n";
  std::vector<std::string> header = {"IAA metric"};
  for (const PairAgreement& p : report.pairs) {
    header.push_back(p.annotator_a + "-" + p.annotator_b);
  }
  md += MarkdownRow(header) + MarkdownRule(header.size());
  for (AgreementMetric metric : kAgreementMetrics) {
    std::vector<std::string> row = {std::string(DisplayName(metric))};
    for (const PairAgreement& p : report.pairs) {
      auto it = p.scores.find(metric);
      row.push_back(Fixed(it == p.scores.end()
                              ? std::nullopt
                              : std::optional<double>(it->second)));
    }
    md += MarkdownRow(row);
  }
  md += fmt::format("\nAggregation: {}.\n", report.aggregation);
  if (report.embedding_note) md += fmt::format("{}\n", *report.embedding_note);
  return out;
}

}  // namespace perturbaudit::cli
