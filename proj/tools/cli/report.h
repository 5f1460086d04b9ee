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

#ifndef PERTURBAUDIT_TOOLS_REPORT_H_
#define PERTURBAUDIT_TOOLS_REPORT_H_

#include <string>

#include "perturbaudit/agreement.h"
#include "perturbaudit/metrics.h"

namespace perturbaudit::cli {

struct Rendered {
  std::string csv;
  std::string markdown;
  std::string json;
};

// Label-wise F1 x 100. Markdown holds the pooled table (languages as column
// groups) followed by one per-set table per language.
Rendered RenderOcclusion(const OcclusionReport& report,
                         const std::string& model);

// +MES/-MES with population std, and flip rates, per language.
Rendered RenderBias(const BiasReport& report, const std::string& model);

// Metrics as rows, annotator pairs as columns.
Rendered RenderAgreement(const AgreementReport& report);

}  // namespace perturbaudit::cli

#endif  // PERTURBAUDIT_TOOLS_REPORT_H_
