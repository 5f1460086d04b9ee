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

#include "perturbaudit/perturb.h"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <map>
#include <random>
#include <set>

#include "perturbaudit/error.h"
#include "perturbaudit/text.h"

namespace perturbaudit {
namespace {

// Facts split into gaps[0] spans[0] gaps[1] ... spans[n-1] gaps[n].
struct Layout {
  std::vector<std::u32string> gaps;
  std::vector<std::u32string> spans;
};

Layout Split(const Case& c) {
  const std::u32string facts = utf8::Decode(c.facts);
  Layout layout;
  int64_t cursor = 0;
  for (const Span& span : c.spans) {
    layout.gaps.push_back(facts.substr(cursor, span.start - cursor));
    layout.spans.push_back(facts.substr(span.start, span.end - span.start));
    cursor = span.end;
  }
  layout.gaps.push_back(facts.substr(cursor));
  return layout;
}

char32_t DominantSeparator(std::u32string_view run) {
  std::map<char32_t, int> counts;
  for (char32_t cp : run) ++counts[cp];
  char32_t best = U' ';
  int best_count = 0;
  for (const auto& [cp, count] : counts) {
    if (count > best_count ||
        (count == best_count && cp == U' ')) {
      best = cp;
      best_count = count;
    }
  }
  return best;
}

std::u32string RepairGap(std::u32string_view gap, bool at_start, bool at_end) {
  std::u32string out;
  size_t i = 0;
  while (i < gap.size()) {
    if (!IsWhitespace(gap[i])) {
      out.push_back(gap[i++]);
      continue;
    }
    size_t j = i;
    while (j < gap.size() && IsWhitespace(gap[j])) ++j;
    const bool leading = out.empty() && at_start;
    const bool trailing = j == gap.size() && at_end;
    if (!leading && !trailing) {
      out.push_back(DominantSeparator(gap.substr(i, j - i)));
    }
    i = j;
  }
  return out;
}

std::string OcclusionId(std::string_view case_id, int k, Rationale label,
                        std::span<const int> indices) {
  std::string id = std::string(case_id) + "#occ-k" + std::to_string(k) + "-" +
                   std::string(ToString(label)) + "-";
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i > 0) id.push_back('.');
    id += std::to_string(indices[i]);
  }
  return id;
}

PerturbedInstance MakeBaseline(const Case& c) {
  PerturbedInstance base;
  base.instance_id = BaselineId(c.case_id);
  base.case_id = c.case_id;
  base.kind = InstanceKind::kBaseline;
  base.language = c.language;
  base.judgment = c.judgment;
  base.text = ReconstructFacts(c);
  base.baseline_id = base.instance_id;
  return base;
}

// Distinct ranks in [0, total), sorted. Floyd's algorithm.
std::vector<uint64_t> SampleRanks(uint64_t total, uint64_t count,
                                  std::mt19937_64& rng) {
  std::set<uint64_t> chosen;
  for (uint64_t j = total - count; j < total; ++j) {
    const uint64_t t = rng() % (j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

std::string BaselineId(std::string_view case_id) {
  return std::string(case_id) + "#base";
}

uint64_t Binomial(int64_t n, int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<uint64_t>::max();
  uint64_t result = 1;
  for (int64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i; cancel first to stay exact.
    const uint64_t g = std::gcd(result, static_cast<uint64_t>(i));
    const uint64_t factor = static_cast<uint64_t>(n - k + i) / (i / g);
    const uint64_t reduced = result / g;
    if (reduced > kMax / factor) return kMax;
    result = reduced * factor;
  }
  return result;
}

std::vector<int> UnrankCombination(int n, int k, uint64_t rank) {
  std::vector<int> out;
  out.reserve(k);
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int candidate = next; candidate < n; ++candidate) {
      const uint64_t with_candidate = Binomial(n - candidate - 1, k - slot - 1);
      if (rank < with_candidate) {
        out.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= with_candidate;
    }
  }
  return out;
}

std::string ApplyOcclusion(const Case& c, std::span<const int> indices) {
  const int n = static_cast<int>(c.spans.size());
  std::vector<bool> removed(n, false);
  for (int index : indices) {
    if (index < 0 || index >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  c.case_id + ": span index " + std::to_string(index));
    }
    removed[index] = true;
  }
  std::optional<SpanLabel> label;
  for (int index : indices) {
    const SpanLabel current = c.spans[index].label;
    if (current == SpanLabel::kLowerCourt) {
      throw Error(ErrorCode::kLowerCourtOcclusionForbidden,
                  c.case_id + ": span index " + std::to_string(index));
    }
    if (label && *label != current) {
      throw Error(ErrorCode::kMixedLabels, c.case_id);
    }
    label = current;
  }
  if (indices.empty()) return ReconstructFacts(c);

  const Layout layout = Split(c);
  std::u32string out;
  std::u32string pending = layout.gaps[0];
  bool merged = false;
  bool kept_any = false;
  for (int i = 0; i < n; ++i) {
    if (removed[i]) {
      pending += layout.gaps[i + 1];
      merged = true;
      continue;
    }
    out += merged ? RepairGap(pending, !kept_any, false) : pending;
    out += layout.spans[i];
    kept_any = true;
    pending = layout.gaps[i + 1];
    merged = false;
  }
  out += merged ? RepairGap(pending, !kept_any, true) : pending;
  return utf8::Encode(out);
}

std::vector<PerturbedInstance> GenerateOcclusionSuite(
    const Case& c, const OcclusionOptions& options) {
  std::vector<PerturbedInstance> suite;
  suite.push_back(MakeBaseline(c));
  const std::string baseline_id = suite.front().instance_id;
  std::mt19937_64 rng(options.seed ^ Fingerprint(c.case_id));

  static constexpr std::array<Rationale, 3> kOrder = {
      Rationale::kSupports, Rationale::kOpposes, Rationale::kNeutral};
  for (Rationale label : kOrder) {
    std::vector<int> members;
    for (int i = 0; i < static_cast<int>(c.spans.size()); ++i) {
      if (c.spans[i].label == ToSpanLabel(label)) members.push_back(i);
    }
    const int n = static_cast<int>(members.size());
    for (int k = 1; k <= std::min(options.k_max, n); ++k) {
      const uint64_t total = Binomial(n, k);
      std::vector<uint64_t> ranks;
      if (options.max_per_cell > 0 &&
          total > static_cast<uint64_t>(options.max_per_cell)) {
        ranks = SampleRanks(total, options.max_per_cell, rng);
      } else {
        ranks.resize(total);
        for (uint64_t r = 0; r < total; ++r) ranks[r] = r;
      }
      for (uint64_t rank : ranks) {
        std::vector<int> indices;
        for (int position : UnrankCombination(n, k, rank)) {
          indices.push_back(members[position]);
        }
        PerturbedInstance p;
        p.instance_id = OcclusionId(c.case_id, k, label, indices);
        p.case_id = c.case_id;
        p.kind = InstanceKind::kOcclusion;
        p.language = c.language;
        p.judgment = c.judgment;
        p.set_k = k;
        p.perturbed_label = label;
        p.text = ApplyOcclusion(c, indices);
        p.occluded_span_indices = std::move(indices);
        p.baseline_id = baseline_id;
        suite.push_back(std::move(p));
      }
    }
  }
  return suite;
}

std::string ReplaceLowerCourts(const Case& c, std::string_view court) {
  const Layout layout = Split(c);
  const std::u32string replacement = utf8::Decode(court);
  std::u32string out = layout.gaps[0];
  for (size_t i = 0; i < c.spans.size(); ++i) {
    out += c.spans[i].label == SpanLabel::kLowerCourt ? replacement
                                                       : layout.spans[i];
    out += layout.gaps[i + 1];
  }
  return utf8::Encode(out);
}

std::vector<PerturbedInstance> GenerateLciSuite(const Case& c,
                                                const CourtRegistry& registry) {
  auto first = std::find_if(c.spans.begin(), c.spans.end(), [](const Span& s) {
    return s.label == SpanLabel::kLowerCourt;
  });
  if (first == c.spans.end()) {
    throw Error(ErrorCode::kNoLowerCourts, c.case_id);
  }
  if (!registry.Covers(c.language)) {
    throw Error(ErrorCode::kInvalidArgument,
                c.case_id + ": registry has no courts for language " +
                    std::string(ToString(c.language)));
  }
  const std::string original = CanonicalCourtName(first->text);

  std::vector<PerturbedInstance> suite;
  suite.push_back(MakeBaseline(c));
  const std::vector<std::string>& courts = registry.Courts(c.language);
  for (size_t i = 0; i < courts.size(); ++i) {
    if (courts[i] == original) continue;
    PerturbedInstance p;
    p.instance_id = c.case_id + "#lci-" + std::to_string(i);
    p.case_id = c.case_id;
    p.kind = InstanceKind::kLci;
    p.language = c.language;
    p.judgment = c.judgment;
    p.inserted_court = courts[i];
    p.original_court = original;
    p.text = ReplaceLowerCourts(c, courts[i]);
    p.baseline_id = suite.front().instance_id;
    suite.push_back(std::move(p));
  }
  return suite;
}

}  // namespace perturbaudit
