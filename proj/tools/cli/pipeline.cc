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

#include "pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "perturbaudit/agreement.h"
#include "perturbaudit/calibration.h"
#include "perturbaudit/corpus.h"
#include "perturbaudit/instance.h"
#include "perturbaudit/perturb.h"
#include "perturbaudit/prediction.h"
#include "perturbaudit/published.h"
#include "perturbaudit/reference_classifier.h"
#include "perturbaudit/remote_backend.h"
#include "perturbaudit/synthetic.h"
#include "perturbaudit/text.h"
#include "report.h"

#ifndef PERTURBAUDIT_VERSION
#define PERTURBAUDIT_VERSION "0.0.0"
#endif

namespace perturbaudit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr char kOcclusionInstances[] = "occlusion_instances.jsonl";
constexpr char kLciInstances[] = "lci_instances.jsonl";
constexpr char kRegistry[] = "court_registry.json";
constexpr char kCalibration[] = "calibration.json";
constexpr char kOcclusionRecords[] = "occlusion_records.jsonl";
constexpr char kLciRecords[] = "lci_records.jsonl";
constexpr char kAgreement[] = "agreement.json";
constexpr char kManifest[] = "manifest.json";

[[noreturn]] void ConfigError(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ConfigError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void RequireFile(const fs::path& path, std::string_view what) {
  if (path.empty()) ConfigError(fmt::format("{} is required", what));
  if (!fs::is_regular_file(path)) {
    ConfigError(fmt::format("{} not found: {}", what, path.string()));
  }
}

std::string Hex(uint64_t v) { return fmt::format("{:016x}", v); }

// Stage outputs are written next to their destination and renamed into
// place only once the stage has fully succeeded.
class StagedOutputs {
 public:
  explicit StagedOutputs(fs::path dir) : dir_(std::move(dir)) {}
  StagedOutputs(const StagedOutputs&) = delete;
  StagedOutputs& operator=(const StagedOutputs&) = delete;

  ~StagedOutputs() {
    if (committed_) return;
    for (const auto& f : files_) {
      std::error_code ec;
      fs::remove(Partial(f.name), ec);
    }
  }

  void Add(const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) ConfigError("cannot create " + dir_.string() + ": " + ec.message());
    files_.push_back({name, Fingerprint(content), content.size()});
    std::ofstream out(Partial(name), std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) ConfigError("cannot write " + Partial(name).string());
  }

  void Commit() {
    for (const auto& f : files_) fs::rename(Partial(f.name), dir_ / f.name);
    committed_ = true;
  }

  ordered_json Describe() const {
    ordered_json list = ordered_json::array();
    for (const auto& f : files_) {
      list.push_back(
          {{"path", f.name}, {"fnv1a64", Hex(f.hash)}, {"bytes", f.bytes}});
    }
    return list;
  }

 private:
  struct File {
    std::string name;
    uint64_t hash;
    size_t bytes;
  };

  fs::path Partial(const std::string& name) const {
    return dir_ / (name + ".partial");
  }

  fs::path dir_;
  std::vector<File> files_;
  bool committed_ = false;
};

ordered_json ConfigJson(const RunConfig& c, Command command) {
  ordered_json j;
  j["command"] = std::string(ToString(command));
  j["corpus"] = c.corpus.string();
  j["validation"] = c.validation.string();
  j["annotations"] = c.annotations.string();
  j["registry"] = c.registry.string();
  j["backend_url"] = c.backend_url;
  j["reference_weights"] = c.reference_weights.string();
  j["epsilon"] = c.epsilon;
  j["target"] = std::string(ToString(c.target));
  j["align"] = std::string(ToString(c.alignment));
  j["k_max"] = c.k_max;
  j["max_per_cell"] = c.max_per_cell;
  j["seed"] = c.seed;
  j["concurrency"] = c.concurrency;
  j["batch_size"] = c.batch_size;
  j["timeout_seconds"] = c.timeout_seconds;
  j["model_name"] = c.model_name;
  if (command == Command::kSynth) {
    j["cases"] = c.synth_cases;
    j["validation_cases"] = c.synth_validation_cases;
    j["courts"] = c.synth_courts;
    j["annotators"] = c.synth_annotators;
    j["noise"] = c.synth_noise;
  }
  if (command == Command::kImportPublished) {
    j["occlusion_sets"] = c.occlusion_sets;
    j["lci"] = c.lci_rows.string();
  }
  return j;
}

ordered_json LoadManifest(const fs::path& dir) {
  const fs::path path = dir / kManifest;
  if (fs::is_regular_file(path)) {
    try {
      auto j = ordered_json::parse(ReadFile(path));
      if (j.is_object()) return j;
    } catch (const ordered_json::exception&) {
    }
  }
  return ordered_json::object();
}

// Adds the manifest, updated with this stage's entry, and commits.
void Finish(StagedOutputs& staged, const RunConfig& config, Command command,
            ordered_json extra = ordered_json::object()) {
  ordered_json manifest = LoadManifest(config.out);
  manifest["tool"] = "perturbaudit";
  manifest["version"] = PERTURBAUDIT_VERSION;
  if (!manifest.contains("stages")) manifest["stages"] = ordered_json::object();
  const ordered_json cfg = ConfigJson(config, command);
  ordered_json stage;
  stage["config_hash"] = Hex(Fingerprint(cfg.dump()));
  stage["config"] = cfg;
  stage["outputs"] = staged.Describe();
  for (auto& [key, value] : extra.items()) stage[key] = value;
  manifest["stages"][std::string(ToString(command))] = std::move(stage);
  staged.Add(kManifest, manifest.dump(2) + "\n");
  staged.Commit();
}

std::vector<Case> LoadCorpus(const fs::path& path) {
  RequireFile(path, "corpus");
  return ParseCorpus(ReadFile(path));
}

template <typename T, typename Fn>
std::string ToJsonl(const std::vector<T>& items, Fn&& write) {
  std::ostringstream out;
  write(out, std::span<const T>(items));
  return out.str();
}

struct ModelAccess {
  std::unique_ptr<ReferenceClassifier> reference;
  std::unique_ptr<RemoteBackend> remote;

  Backend& backend() {
    if (reference) return *reference;
    return *remote;
  }
  TokenEmbedder* embedder() { return remote.get(); }
};

ModelAccess MakeModel(const RunConfig& config) {
  ModelAccess access;
  if (!config.reference_weights.empty()) {
    RequireFile(config.reference_weights, "reference weights");
    access.reference = std::make_unique<ReferenceClassifier>(
        ReferenceClassifier::FromJson(ReadFile(config.reference_weights)));
    return access;
  }
  if (config.backend_url.empty()) {
    ConfigError(fmt::format(
        "no backend: pass --reference-weights, --backend-url or set {}",
        kModelUrlEnv));
  }
  RemoteOptions options;
  options.base_url = config.backend_url;
  options.auth_header = config.auth_header;
  options.timeout_seconds = config.timeout_seconds;
  options.max_in_flight = config.concurrency;
  options.batch_size = config.batch_size;
  try {
    access.remote = std::make_unique<RemoteBackend>(options);
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::kData) ConfigError(e.what());
    throw;
  }
  return access;
}

std::string ModelName(const RunConfig& config, ModelAccess& model) {
  if (!config.model_name.empty()) return config.model_name;
  return model.backend().name();
}

CalibrationModel LoadCalibration(const RunConfig& config, std::ostream& log) {
  const fs::path path = config.out / kCalibration;
  if (!fs::is_regular_file(path)) {
    if (config.verbose) log << "no calibration.json, using T=1\n";
    return CalibrationModel();
  }
  return ParseCalibration(ReadFile(path));
}

std::vector<Prediction> Predict(Backend& backend,
                                const std::vector<PerturbedInstance>& instances,
                                const CalibrationModel& calibration) {
  if (instances.empty()) return {};
  std::vector<std::string> texts;
  texts.reserve(instances.size());
  for (const auto& p : instances) texts.push_back(p.text);
  std::vector<Prediction> predictions =
      PredictBatch(backend, texts, calibration);
  for (size_t i = 0; i < instances.size(); ++i) {
    predictions[i].instance_id = instances[i].instance_id;
  }
  return predictions;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void GenerateOcclusion(const RunConfig& config, std::ostream& log) {
  const auto corpus = LoadCorpus(config.corpus);
  OcclusionOptions options;
  options.k_max = config.k_max;
  options.max_per_cell = config.max_per_cell;
  options.seed = config.seed;
  std::vector<PerturbedInstance> instances;
  for (const Case& c : corpus) {
    auto suite = GenerateOcclusionSuite(c, options);
    instances.insert(instances.end(), std::make_move_iterator(suite.begin()),
                     std::make_move_iterator(suite.end()));
  }
  StagedOutputs staged(config.out);
  staged.Add(kOcclusionInstances, ToJsonl(instances, WriteInstances));
  Finish(staged, config, Command::kGenerateOcclusion,
         {{"cases", corpus.size()}, {"instances", instances.size()}});
  log << fmt::format("generate-occlusion: {} instances from {} cases\n",
                     instances.size(), corpus.size());
}

void GenerateLci(const RunConfig& config, std::ostream& log) {
  const auto corpus = LoadCorpus(config.corpus);
  CourtRegistry registry;
  if (!config.registry.empty()) {
    RequireFile(config.registry, "court registry");
    registry = ParseRegistry(ReadFile(config.registry));
  } else {
    registry = BuildCourtRegistry(corpus);
  }
  std::vector<PerturbedInstance> instances;
  int64_t skipped = 0;
  for (const Case& c : corpus) {
    const bool has_court =
        std::any_of(c.spans.begin(), c.spans.end(), [](const Span& s) {
          return s.label == SpanLabel::kLowerCourt;
        });
    if (!has_court) {
      ++skipped;
      if (config.verbose) {
        log << fmt::format("skipping {}: no lower court span\n", c.case_id);
      }
      continue;
    }
    auto suite = GenerateLciSuite(c, registry);
    instances.insert(instances.end(), std::make_move_iterator(suite.begin()),
                     std::make_move_iterator(suite.end()));
  }
  size_t num_courts = 0;
  for (const auto& [language, courts] : registry.all()) {
    num_courts += courts.size();
  }
  StagedOutputs staged(config.out);
  staged.Add(kRegistry, SerializeRegistry(registry));
  staged.Add(kLciInstances, ToJsonl(instances, WriteInstances));
  Finish(staged, config, Command::kGenerateLci,
         {{"cases", corpus.size()},
          {"skipped_without_lower_court", skipped},
          {"courts", num_courts},
          {"instances", instances.size()}});
  log << fmt::format(
      "generate-lci: {} instances from {} cases ({} without a lower court), "
      "{} courts\n",
      instances.size(), corpus.size() - skipped, skipped, num_courts);
}

void Calibrate(const RunConfig& config, std::ostream& log) {
  const fs::path path =
      config.validation.empty() ? config.corpus : config.validation;
  const auto cases = LoadCorpus(path);
  if (cases.empty()) {
    throw Error(ErrorCode::kDegenerateValidationSet, "validation set is empty");
  }
  ModelAccess model = MakeModel(config);
  std::vector<std::string> texts;
  std::vector<int> labels;
  for (const Case& c : cases) {
    texts.push_back(c.facts);
    labels.push_back(ToIndex(c.judgment));
  }
  const std::vector<Logits> logits = model.backend().Score(texts);
  if (logits.size() != texts.size()) {
    throw Error(ErrorCode::kProtocolError, "logit count mismatch");
  }
  const TemperatureFit fit = FitTemperature(logits, labels);
  if (fit.degenerate) log << "warning: " << fit.warning << "\n";
  StagedOutputs staged(config.out);
  staged.Add(kCalibration, SerializeCalibration(fit));
  Finish(staged, config, Command::kCalibrate,
         {{"model", ModelName(config, model)}, {"examples", cases.size()}});
  log << fmt::format("calibrate: T={:.6f} (NLL {:.6f}, at T=1 {:.6f})\n",
                     fit.model.temperature(), fit.nll, fit.nll_at_one);
}

void Evaluate(const RunConfig& config, Command command, std::ostream& log) {
  const bool occlusion = command == Command::kEvaluateOcclusion;
  const fs::path input =
      config.out / (occlusion ? kOcclusionInstances : kLciInstances);
  RequireFile(input, occlusion ? "occlusion instances (run generate-occlusion)"
                               : "LCI instances (run generate-lci)");
  const auto instances = ParseInstances(ReadFile(input));
  ModelAccess model = MakeModel(config);
  const CalibrationModel calibration = LoadCalibration(config, log);
  Timer timer;
  const auto predictions = Predict(model.backend(), instances, calibration);
  ScoringOptions scoring;
  scoring.epsilon = config.epsilon;
  scoring.target = config.target;
  scoring.alignment = config.alignment;
  const auto records = ScoreInstances(instances, predictions, scoring);
  if (config.verbose) {
    log << fmt::format("scored {} instances in {:.2f}s\n", instances.size(),
                       timer.Seconds());
  }
  StagedOutputs staged(config.out);
  staged.Add(occlusion ? kOcclusionRecords : kLciRecords,
             ToJsonl(records, WriteRecords));
  Finish(staged, config, command,
         {{"model", ModelName(config, model)},
          {"temperature", calibration.temperature()},
          {"instances", instances.size()},
          {"records", records.size()}});
  log << fmt::format("{}: {} records\n", ToString(command), records.size());
}

void Iaa(const RunConfig& config, std::ostream& log) {
  const fs::path path =
      config.annotations.empty() ? config.corpus : config.annotations;
  RequireFile(path, "annotations");
  const auto cases = ParseCorpus(ReadFile(path));
  const AnnotationSet annotations = GroupAnnotations(cases);
  std::optional<ModelAccess> model;
  if (!config.backend_url.empty()) model = MakeModel(config);
  TokenEmbedder* embedder = model ? model->embedder() : nullptr;
  const AgreementReport report = PairwiseAgreement(annotations, embedder);
  const Rendered rendered = RenderAgreement(report);
  StagedOutputs staged(config.out);
  staged.Add(kAgreement, rendered.json);
  staged.Add("agreement.csv", rendered.csv);
  staged.Add("agreement.md", rendered.markdown);
  Finish(staged, config, Command::kIaa,
         {{"annotators", annotations.size()}, {"pairs", report.pairs.size()}});
  if (report.embedding_note) log << "note: " << *report.embedding_note << "\n";
  log << fmt::format("iaa: {} annotator pairs\n", report.pairs.size());
}

std::string ReportModelName(const RunConfig& config) {
  if (!config.model_name.empty()) return config.model_name;
  const ordered_json manifest = LoadManifest(config.out);
  for (const char* stage : {"evaluate-occlusion", "evaluate-lci"}) {
    const auto stages = manifest.find("stages");
    if (stages == manifest.end() || !stages->contains(stage)) continue;
    const auto& entry = (*stages)[stage];
    if (entry.contains("model") && entry["model"].is_string()) {
      return entry["model"].get<std::string>();
    }
  }
  return "model";
}

std::vector<ExplainabilityRecord> LoadRecords(const fs::path& path) {
  std::istringstream in(ReadFile(path));
  return ParseRecords(in);
}

void Report(const RunConfig& config, std::ostream& log) {
  const fs::path occ_path = config.out / kOcclusionRecords;
  const fs::path lci_path = config.out / kLciRecords;
  const fs::path agreement_path = config.out / kAgreement;
  const bool have_occ = fs::is_regular_file(occ_path);
  const bool have_lci = fs::is_regular_file(lci_path);
  const bool have_agreement = fs::is_regular_file(agreement_path);
  if (!have_occ && !have_lci && !have_agreement) {
    ConfigError("nothing to report in " + config.out.string() +
                " (run an evaluate stage or iaa first)");
  }
  const std::string model = ReportModelName(config);
  const auto occ_records =
      have_occ ? LoadRecords(occ_path) : std::vector<ExplainabilityRecord>{};
  const auto lci_records =
      have_lci ? LoadRecords(lci_path) : std::vector<ExplainabilityRecord>{};

  const Rendered occlusion = RenderOcclusion(PerLabelF1(occ_records), model);
  const Rendered bias = RenderBias(BuildBiasReport(lci_records), model);
  std::string markdown = "# perturbaudit report\n\n" + occlusion.markdown +
                         "\n" + bias.markdown;

  StagedOutputs staged(config.out);
  staged.Add("occlusion_f1.csv", occlusion.csv);
  staged.Add("occlusion_f1.json", occlusion.json);
  staged.Add("occlusion_f1.md", occlusion.markdown);
  staged.Add("bias.csv", bias.csv);
  staged.Add("bias.json", bias.json);
  staged.Add("bias.md", bias.markdown);
  if (have_agreement) {
    const Rendered agreement =
        RenderAgreement(ParseAgreement(ReadFile(agreement_path)));
    staged.Add("agreement.csv", agreement.csv);
    staged.Add("agreement.md", agreement.markdown);
    markdown += "\n" + agreement.markdown;
  }
  staged.Add("report.md", markdown);
  Finish(staged, config, Command::kReport,
         {{"occlusion_records", occ_records.size()},
          {"lci_records", lci_records.size()}});
  log << fmt::format("report: {} occlusion and {} LCI records\n",
                     occ_records.size(), lci_records.size());
}

void Synth(const RunConfig& config, std::ostream& log) {
  SyntheticOptions options;
  options.num_cases = config.synth_cases;
  options.num_validation_cases = config.synth_validation_cases;
  options.seed = config.seed;
  options.k_max = config.k_max;
  options.min_effect = 3.0 * config.epsilon;
  options.courts_per_language = config.synth_courts;
  const SyntheticCorpus synth = GenerateSyntheticCorpus(options);

  StagedOutputs staged(config.out);
  std::ostringstream corpus;
  WriteCorpus(corpus, synth.cases);
  staged.Add("corpus.jsonl", corpus.str());
  std::ostringstream validation;
  WriteCorpus(validation, synth.validation);
  staged.Add("validation.jsonl", validation.str());
  staged.Add("reference_weights.json", synth.classifier.ToJson());
  if (config.synth_annotators >= 2) {
    const auto annotated =
        SimulateAnnotators(synth.cases, config.synth_annotators,
                           config.synth_noise, config.seed);
    std::ostringstream out;
    WriteCorpus(out, annotated);
    staged.Add("annotations.jsonl", out.str());
  }
  Finish(staged, config, Command::kSynth);
  log << fmt::format("synth: {} cases, {} validation cases\n",
                     synth.cases.size(), synth.validation.size());
}

void ImportPublishedStage(const RunConfig& config, std::ostream& log) {
  std::vector<std::unique_ptr<std::ifstream>> streams;
  std::vector<OcclusionSource> sources;
  for (const std::string& entry : config.occlusion_sets) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      ConfigError("--occlusion-set expects K=PATH, got " + entry);
    }
    int set_k = 0;
    try {
      set_k = std::stoi(entry.substr(0, eq));
    } catch (const std::exception&) {
      ConfigError("--occlusion-set expects K=PATH, got " + entry);
    }
    if (set_k < 1 || set_k > 8) ConfigError("occlusion set must be in 1..8");
    const fs::path path = entry.substr(eq + 1);
    RequireFile(path, "occlusion set");
    streams.push_back(std::make_unique<std::ifstream>(path, std::ios::binary));
    sources.push_back({set_k, streams.back().get()});
  }
  std::unique_ptr<std::ifstream> lci;
  if (!config.lci_rows.empty()) {
    RequireFile(config.lci_rows, "LCI set");
    lci = std::make_unique<std::ifstream>(config.lci_rows, std::ios::binary);
  }
  const ImportResult result = ImportPublished(sources, lci.get());

  StagedOutputs staged(config.out);
  std::ostringstream corpus;
  WriteCorpus(corpus, result.cases);
  staged.Add("published_corpus.jsonl", corpus.str());
  if (!sources.empty()) {
    staged.Add(kOcclusionInstances,
               ToJsonl(result.occlusion_instances, WriteInstances));
  }
  if (lci) {
    staged.Add(kLciInstances, ToJsonl(result.lci_instances, WriteInstances));
  }
  staged.Add("published_counts.json", SerializeCounts(result.counts));
  Finish(staged, config, Command::kImportPublished);
  for (Language language : kLanguages) {
    log << fmt::format(
        "{}: {} documents, {} occlusion instances, {} LCI instances\n",
        ToString(language),
        result.counts.documents.count(language)
            ? result.counts.documents.at(language)
            : 0,
        result.counts.OcclusionTotal(language), result.counts.Lci(language));
  }
}

}  // namespace

std::string_view ToString(Command command) {
  switch (command) {
    case Command::kGenerateOcclusion: return "generate-occlusion";
    case Command::kGenerateLci: return "generate-lci";
    case Command::kCalibrate: return "calibrate";
    case Command::kEvaluateOcclusion: return "evaluate-occlusion";
    case Command::kEvaluateLci: return "evaluate-lci";
    case Command::kIaa: return "iaa";
    case Command::kReport: return "report";
    case Command::kSynth: return "synth";
    case Command::kImportPublished: return "import-published";
  }
  return "unknown";
}

void ValidateConfig(const RunConfig& c, Command command) {
  if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) {
    ConfigError("--epsilon must be a finite value >= 0");
  }
  if (c.k_max < 1 || c.k_max > 8) ConfigError("--k-max must be in 1..8");
  if (c.max_per_cell < 0) ConfigError("--max-per-cell must be >= 0");
  if (c.concurrency < 1) ConfigError("--concurrency must be >= 1");
  if (c.batch_size < 1) ConfigError("--batch-size must be >= 1");
  if (!(c.timeout_seconds > 0.0)) ConfigError("--timeout must be > 0");
  if (c.out.empty()) ConfigError("--out is required");
  if (!c.reference_weights.empty() && !c.backend_url.empty() &&
      command != Command::kIaa) {
    ConfigError("pass either --reference-weights or --backend-url, not both");
  }
  if (!c.reference_weights.empty()) {
    RequireFile(c.reference_weights, "reference weights");
  }
  switch (command) {
    case Command::kGenerateOcclusion:
    case Command::kGenerateLci:
      RequireFile(c.corpus, "corpus");
      if (!c.registry.empty()) RequireFile(c.registry, "court registry");
      break;
    case Command::kCalibrate:
      RequireFile(c.validation.empty() ? c.corpus : c.validation,
                  "validation corpus");
      break;
    case Command::kIaa:
      RequireFile(c.annotations.empty() ? c.corpus : c.annotations,
                  "annotations");
      break;
    case Command::kSynth:
      if (c.synth_cases < 0 || c.synth_validation_cases < 0) {
        ConfigError("case counts must be >= 0");
      }
      if (c.synth_courts < 0 || c.synth_courts > 26) {
        ConfigError("--courts must be in 0..26");
      }
      if (!(c.synth_noise >= 0.0 && c.synth_noise <= 1.0)) {
        ConfigError("--noise must be in [0, 1]");
      }
      break;
    case Command::kImportPublished:
      if (c.occlusion_sets.empty() && c.lci_rows.empty()) {
        ConfigError("pass --occlusion-set and/or --lci");
      }
      break;
    case Command::kEvaluateOcclusion:
    case Command::kEvaluateLci:
    case Command::kReport:
      break;
  }
}

void RunPipeline(const RunConfig& config, Command command, std::ostream& log) {
  ValidateConfig(config, command);
  switch (command) {
    case Command::kGenerateOcclusion: return GenerateOcclusion(config, log);
    case Command::kGenerateLci: return GenerateLci(config, log);
    case Command::kCalibrate: return Calibrate(config, log);
    case Command::kEvaluateOcclusion:
    case Command::kEvaluateLci: return Evaluate(config, command, log);
    case Command::kIaa: return Iaa(config, log);
    case Command::kReport: return Report(config, log);
    case Command::kSynth: return Synth(config, log);
    case Command::kImportPublished: return ImportPublishedStage(config, log);
  }
}

int ExitCode(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return 2;
    case ErrorCategory::kBackend: return 3;
    case ErrorCategory::kData: return 4;
  }
  return 1;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig config;
  CLI::App app{"Occlusion explainability and lower court bias evaluation",
               "perturbaudit"};
  app.set_version_flag("--version", PERTURBAUDIT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::string target = std::string(ToString(config.target));
  std::string align = std::string(ToString(config.alignment));
  app.add_option("--corpus", config.corpus, "Canonical corpus JSONL");
  app.add_option("--validation", config.validation,
                 "Validation corpus for calibrate (default: --corpus)");
  app.add_option("--annotations", config.annotations,
                 "Per-annotator corpus for iaa (default: --corpus)");
  app.add_option("--registry", config.registry,
                 "Court registry JSON for generate-lci (default: from corpus)");
  app.add_option("--backend-url", config.backend_url, "Model service base URL")
      ->envname(kModelUrlEnv);
  app.add_option("--reference-weights", config.reference_weights,
                 "Weights file for the built-in reference classifier");
  app.add_option("--auth-header", config.auth_header,
                 "Header sent to the model service, 'Name: value'");
  app.add_option("--timeout", config.timeout_seconds,
                 "Request timeout in seconds");
  app.add_option("--concurrency", config.concurrency,
                 "Requests in flight against the model service");
  app.add_option("--batch-size", config.batch_size, "Texts per request");
  app.add_option("--model-name", config.model_name, "Row label in reports");
  app.add_option("--epsilon", config.epsilon, "Neutral band half-width");
  app.add_option("--target", target, "Confidence target")
      ->check(CLI::IsMember({"predicted", "gold"}));
  app.add_option("--align", align, "Gold alignment")
      ->check(CLI::IsMember({"prediction", "outcome"}));
  app.add_option("--k-max", config.k_max, "Largest occlusion set size (1..8)");
  app.add_option("--max-per-cell", config.max_per_cell,
                 "Cap on combinations per (label, k), 0 for all");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--out", config.out, "Run directory");
  app.add_flag("-v,--verbose", config.verbose, "Progress details on stderr");

  struct Sub {
    Command command;
    const char* help;
  };
  const Sub subs[] = {
      {Command::kGenerateOcclusion, "Occlusion instances for every case"},
      {Command::kGenerateLci, "Lower court insertion instances"},
      {Command::kCalibrate, "Fit a temperature on the validation corpus"},
      {Command::kEvaluateOcclusion, "Score occlusion instances"},
      {Command::kEvaluateLci, "Score lower court insertion instances"},
      {Command::kIaa, "Pairwise inter-annotator agreement"},
      {Command::kReport, "Render CSV, JSON and Markdown tables"},
      {Command::kSynth, "Write a synthetic corpus and reference weights"},
      {Command::kImportPublished, "Import the published test sets"},
  };
  std::vector<std::pair<CLI::App*, Command>> commands;
  for (const Sub& s : subs) {
    commands.emplace_back(app.add_subcommand(std::string(ToString(s.command)), s.help),
                          s.command);
  }
  CLI::App* synth = commands[7].first;
  synth->add_option("--cases", config.synth_cases, "Test cases");
  synth->add_option("--validation-cases", config.synth_validation_cases,
                    "Validation cases");
  synth->add_option("--courts", config.synth_courts, "Courts per language");
  synth->add_option("--annotators", config.synth_annotators,
                    "Simulated annotators (0 or 1 to skip)");
  synth->add_option("--noise", config.synth_noise,
                    "Per-span disagreement probability");
  CLI::App* import = commands[8].first;
  import->add_option("--occlusion-set", config.occlusion_sets,
                     "K=PATH of an occlusion set JSONL, repeatable");
  import->add_option("--lci", config.lci_rows, "LCI set JSONL");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1),
                                     args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  config.target = *ParseConfidenceTarget(target);
  config.alignment = *ParseGoldAlignment(align);

  Command command = Command::kReport;
  for (const auto& [sub, cmd] : commands) {
    if (sub->parsed()) command = cmd;
  }
  try {
    RunPipeline(config, command, err);
    return 0;
  } catch (const Error& e) {
    err << fmt::format("perturbaudit {}: error: {}\n", ToString(command),
                       e.what());
    return ExitCode(e.category());
  } catch (const fs::filesystem_error& e) {
    err << fmt::format("perturbaudit {}: error: {}\n", ToString(command),
                       e.what());
    return 2;
  } catch (const std::exception& e) {
    err << fmt::format("perturbaudit {}: internal error: {}\n",
                       ToString(command), e.what());
    return 1;
  }
}

}  // namespace perturbaudit::cli
