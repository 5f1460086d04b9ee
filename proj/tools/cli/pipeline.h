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

#ifndef PERTURBAUDIT_TOOLS_PIPELINE_H_
#define PERTURBAUDIT_TOOLS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perturbaudit/error.h"
#include "perturbaudit/metrics.h"

namespace perturbaudit::cli {

enum class Command {
  kGenerateOcclusion,
  kGenerateLci,
  kCalibrate,
  kEvaluateOcclusion,
  kEvaluateLci,
  kIaa,
  kReport,
  kSynth,
  kImportPublished,
};

std::string_view ToString(Command command);

struct RunConfig {
  std::filesystem::path corpus;
  // calibrate reads this, falling back to corpus.
  std::filesystem::path validation;
  // iaa reads this, falling back to corpus.
  std::filesystem::path annotations;
  std::filesystem::path registry;
  std::string backend_url;
  std::filesystem::path reference_weights;
  std::string auth_header;
  double timeout_seconds = 60.0;
  int concurrency = 8;
  int batch_size = 32;
  std::string model_name;

  double epsilon = kDefaultEpsilon;
  ConfidenceTarget target = ConfidenceTarget::kPredicted;
  GoldAlignment alignment = GoldAlignment::kPredictionRelative;
  int k_max = 4;
  int64_t max_per_cell = 0;
  uint64_t seed = 0;
  std::filesystem::path out = "run";

  // synth
  int synth_cases = 200;
  int synth_validation_cases = 100;
  int synth_courts = 13;
  int synth_annotators = 3;
  double synth_noise = 0.1;

  // import-published: "k=path" pairs
  std::vector<std::string> occlusion_sets;
  std::filesystem::path lci_rows;

  bool verbose = false;
};

// Checks ranges and that every input the command reads exists. Throws
// Error(kConfig).
void ValidateConfig(const RunConfig& config, Command command);

// Runs one stage, writing its artifacts into config.out. Outputs appear only
// when the whole stage succeeds. Throws Error.
void RunPipeline(const RunConfig& config, Command command, std::ostream& log);

int ExitCode(ErrorCategory category);

// Argument parsing, dispatch and error reporting. args[0] is the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace perturbaudit::cli

#endif  // PERTURBAUDIT_TOOLS_PIPELINE_H_
