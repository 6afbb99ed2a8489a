/* Copyright 2026 The foldvote Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "foldvote/runs.hpp"

#include <map>
#include <set>
#include <sstream>

#include "foldvote/error.hpp"
#include "foldvote/manifest.hpp"
#include "foldvote/random.hpp"
#include "foldvote/report.hpp"
#include "json.hpp"

namespace foldvote {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::string_view kTool = "foldvote";
constexpr std::string_view kMajorityLabelsFile = "labels/majority_vote.tsv";
constexpr std::string_view kHighestSumLabelsFile = "labels/highest_sum.tsv";
constexpr TableFormat kAllFormats[] = {TableFormat::kText, TableFormat::kTsv,
                                       TableFormat::kJson};

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

// Writes files below a root and remembers (relative path, digest) pairs for
// the manifest.
class OutputTree {
 public:
  explicit OutputTree(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& relative, std::string_view content) {
    write_text_file(root_ / relative, content);
    digests_[relative] = sha256_hex(content);
  }

  Json to_json() const {
    Json out = Json::array();
    for (const auto& [path, digest] : digests_) {
      out.push_back({{"path", path}, {"sha256", digest}});
    }
    return out;
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::map<std::string, std::string> digests_;
};

template <typename Writer>
std::string to_document(Writer&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

Json metrics_object(const MetricsReport& m, const ConfusionMatrix* cm) {
  Json out = {{"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"accuracy", m.accuracy}};
  if (cm != nullptr) {
    out["tp"] = cm->tp;
    out["fp"] = cm->fp;
    out["fn"] = cm->fn;
    out["tn"] = cm->tn;
  }
  return out;
}

Json cv_result_json(const CvResult& result, const ModelSpec& spec) {
  Json doc;
  doc["model"] = result.model_name;
  doc["spec"] = spec.to_string();
  doc["aggregation"] = std::string(to_string(result.aggregation));
  doc["best_epoch"] = result.best_epoch;
  doc["epochs"] = Json::array();
  for (const auto& rec : result.per_epoch) {
    ConfusionMatrix total;
    for (const auto& cm : rec.fold_confusions) total += cm;
    Json folds = Json::array();
    for (std::size_t f = 0; f < rec.fold_metrics.size(); ++f) {
      folds.push_back(
          metrics_object(rec.fold_metrics[f], &rec.fold_confusions[f]));
    }
    doc["epochs"].push_back({{"epoch", rec.epoch},
                             {"mean_fold_f1", rec.mean_fold_f1},
                             {"pooled", metrics_object(rec.pooled, &total)},
                             {"fold_averaged",
                              metrics_object(rec.fold_averaged, nullptr)},
                             {"folds", std::move(folds)}});
  }
  return doc;
}

Json tie_json(const EnsembleEvaluation& eval, std::size_t n_examples) {
  if (!eval.majority) return nullptr;
  const auto ties = eval.majority->tie_count;
  return {{"tie_count", ties},
          {"tie_rate", n_examples == 0 ? 0.0
                                       : static_cast<double>(ties) /
                                             static_cast<double>(n_examples)}};
}

Json adapter_json(const std::optional<fs::path>& path) {
  if (!path) return nullptr;
  const auto adapter = load_adapter_manifest(*path);
  Json doc = Json::parse(adapter.to_json());
  doc["source"] = {{"path", path->generic_string()},
                   {"sha256", sha256_file(*path)}};
  return doc;
}

void write_tables(OutputTree& tree, const std::string& stem,
                  const ResultsTable& table) {
  for (const auto format : kAllFormats) {
    tree.write("tables/" + stem + "." + std::string(file_extension(format)),
               render_table(table, format));
  }
}

void write_label_files(OutputTree& tree, const EnsembleEvaluation& eval) {
  if (eval.majority) {
    tree.write(std::string(kMajorityLabelsFile), to_document([&](auto& out) {
                 write_label_map(eval.majority->labels, out);
               }));
  }
  if (eval.highest_sum) {
    tree.write(std::string(kHighestSumLabelsFile), to_document([&](auto& out) {
                 write_label_map(*eval.highest_sum, out);
               }));
  }
}

void prepare_run_dir(const fs::path& dir, bool overwrite) {
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_empty(dir, ec)) {
    if (!overwrite) {
      invalid("run directory '" + dir.generic_string() +
              "' already exists and is not empty");
    }
    fs::remove_all(dir, ec);
    if (ec) {
      throw Error(ErrorCode::kIo,
                  "cannot clear '" + dir.generic_string() + "': " + ec.message());
    }
  }
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create '" + dir.generic_string() + "': " + ec.message());
  }
}

template <typename T>
const T& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) invalid(std::string("manifest lacks '") + key + "'");
  return doc[key].get_ref<const T&>();
}

}  // namespace

CvRunSummary run_cv_experiment(const CvRunOptions& options) {
  options.grid.validate();
  if (options.models.empty()) invalid("at least one model is required");
  std::set<std::string> names;
  for (const auto& spec : options.models) {
    if (!is_valid_model_name(spec.name)) {
      invalid("invalid model name '" + spec.name + "'");
    }
    if (!names.insert(spec.name).second) {
      invalid("duplicate model name '" + spec.name + "'");
    }
    spec.features.validate();
    spec.train.validate();
  }
  const std::string run_id = options.run_id.empty()
                                 ? "seed-" + std::to_string(options.seed)
                                 : options.run_id;
  if (!is_valid_model_name(run_id)) invalid("invalid run id '" + run_id + "'");

  const Corpus corpus = load_corpus(options.input, options.format);
  const std::string input_digest = sha256_file(options.input);
  const FoldPlan plan =
      make_folds(corpus, options.k, options.seed, options.stratified);
  // Validate the adapter file before any training happens.
  const Json adapter = adapter_json(options.adapter_manifest);

  CvRunSummary summary;
  summary.run_dir = options.out_root / run_id;
  summary.stratified = plan.stratified();
  summary.outcomes = run_cv(corpus, plan, options.models, options.grid,
                            options.seed, options.aggregation, options.jobs);

  std::vector<PredictionSet> members;
  for (const auto& o : summary.outcomes) {
    members.push_back(o.out_of_fold.at(o.result.best_epoch));
  }
  EnsembleOptions ens;
  ens.tie = TiePolicy{options.tie, tie_seed(options.seed)};
  ens.scale = options.scale;
  ens.aggregation = options.aggregation;
  summary.ensembles = evaluate_ensembles(EnsembleInput::create(members),
                                         corpus, ens, &plan);

  prepare_run_dir(summary.run_dir, options.overwrite);
  OutputTree tree(summary.run_dir);
  tree.write("folds.tsv",
             to_document([&](auto& out) { write_fold_plan(plan, out); }));
  for (std::size_t m = 0; m < summary.outcomes.size(); ++m) {
    const auto& o = summary.outcomes[m];
    const auto& name = o.result.model_name;
    for (const auto& [epoch, preds] : o.out_of_fold) {
      tree.write("preds/" + name + "/" + std::to_string(epoch) + ".pred.tsv",
                 to_document([&](auto& out) { write_prediction_set(preds, out); }));
    }
    tree.write("best/" + name + ".pred.tsv", to_document([&](auto& out) {
                 write_prediction_set(o.out_of_fold.at(o.result.best_epoch),
                                      out);
               }));
    tree.write("cv/" + name + ".json",
               cv_result_json(o.result, options.models[m]).dump(2) + "\n");
  }
  const auto best_rows = best_epoch_rows(summary.outcomes);
  for (const auto format : kAllFormats) {
    tree.write("tables/best_epochs." + std::string(file_extension(format)),
               render_best_epochs(best_rows, format));
  }
  write_tables(tree, "results", summary.ensembles.table);
  write_label_files(tree, summary.ensembles);

  Json manifest;
  manifest["tool"] = std::string(kTool);
  manifest["version"] = FOLDVOTE_VERSION;
  manifest["command"] = "cv";
  manifest["run_id"] = run_id;
  manifest["seed"] = options.seed;
  manifest["seed_derivation"] = std::string(kSeedDerivation);
  Json models = Json::array();
  for (const auto& spec : options.models) models.push_back(spec.to_string());
  manifest["config"] = {
      {"format", std::string(to_string(options.format))},
      {"k", options.k},
      {"epochs", options.grid.epochs},
      {"models", std::move(models)},
      {"stratified", options.stratified},
      {"aggregation", std::string(to_string(options.aggregation))},
      {"tie", std::string(to_string(options.tie))},
      {"scale", std::string(to_string(options.scale))},
      {"ensemble_source", "out-of-fold scores at each model's best epoch"}};
  manifest["inputs"] = Json::array(
      {{{"role", "corpus"},
        {"path", options.input.generic_string()},
        {"sha256", input_digest},
        {"examples", corpus.size()}}});
  manifest["stratified"] = plan.stratified();
  manifest["aggregation"] = std::string(to_string(options.aggregation));
  manifest["zero_division"] = std::string(kZeroDivisionNote);
  Json best = Json::object();
  for (const auto& o : summary.outcomes) {
    best[o.result.model_name] = o.result.best_epoch;
  }
  manifest["best_epochs"] = std::move(best);
  manifest["majority_vote"] = tie_json(summary.ensembles, corpus.size());
  if (!adapter.is_null()) manifest["adapter"] = adapter;
  manifest["outputs"] = tree.to_json();
  write_text_file(summary.run_dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

CvRunOptions cv_options_from_manifest(const fs::path& manifest_path) {
  Json doc;
  try {
    doc = Json::parse(read_text_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    invalid(manifest_path.generic_string() + ": invalid JSON: " + e.what());
  }
  try {
    if (!doc.is_object() || field<std::string>(doc, "command") != "cv") {
      invalid("not a cv run manifest");
    }
    const Json& config = doc.at("config");
    const Json& input = doc.at("inputs").at(0);

    CvRunOptions options;
    options.input = field<std::string>(input, "path");
    const auto format = parse_corpus_format(field<std::string>(config, "format"));
    const auto aggregation =
        parse_aggregation(field<std::string>(config, "aggregation"));
    const auto tie = parse_tie_kind(field<std::string>(config, "tie"));
    const auto scale = parse_score_scale(field<std::string>(config, "scale"));
    if (!format || !aggregation || !tie || !scale) {
      invalid("manifest has an unknown enumeration value");
    }
    options.format = *format;
    options.aggregation = *aggregation;
    options.tie = *tie;
    options.scale = *scale;
    options.k = config.at("k").get<std::uint32_t>();
    options.grid.epochs = config.at("epochs").get<std::vector<int>>();
    options.models.clear();
    for (const auto& spec : config.at("models")) {
      options.models.push_back(ModelSpec::parse(spec.get<std::string>()));
    }
    options.stratified = config.at("stratified").get<bool>();
    options.seed = doc.at("seed").get<Seed>();
    options.run_id = field<std::string>(doc, "run_id");

    const auto& expected = field<std::string>(input, "sha256");
    const auto actual = sha256_file(options.input);
    if (actual != expected) {
      throw Error(ErrorCode::kDigestMismatch,
                  "input '" + options.input.generic_string() +
                      "' changed since the manifest was written",
                  {"expected " + expected, "actual " + actual});
    }
    if (doc.contains("adapter") && doc["adapter"].contains("source")) {
      options.adapter_manifest =
          field<std::string>(doc["adapter"]["source"], "path");
    }
    return options;
  } catch (const nlohmann::json::exception& e) {
    invalid(manifest_path.generic_string() + ": " + e.what());
  }
}

std::optional<EnsembleMethod> parse_ensemble_method(std::string_view name) {
  if (name == "majority") return EnsembleMethod::kMajority;
  if (name == "highest-sum" || name == "highest_sum") {
    return EnsembleMethod::kHighestSum;
  }
  if (name == "both") return EnsembleMethod::kBoth;
  return std::nullopt;
}

std::string_view to_string(EnsembleMethod method) {
  switch (method) {
    case EnsembleMethod::kMajority:
      return "majority";
    case EnsembleMethod::kHighestSum:
      return "highest-sum";
    case EnsembleMethod::kBoth:
      break;
  }
  return "both";
}

EnsembleRunSummary run_ensemble(const EnsembleRunOptions& options) {
  if (options.predictions.empty()) {
    invalid("at least one prediction file is required");
  }
  std::vector<PredictionSet> members;
  Json inputs = Json::array();
  for (const auto& arg : options.predictions) {
    std::optional<std::string> name;
    fs::path path = arg;
    const auto eq = arg.find('=');
    if (eq != std::string::npos && eq > 0 &&
        is_valid_model_name(std::string_view(arg).substr(0, eq))) {
      name = arg.substr(0, eq);
      path = arg.substr(eq + 1);
    }
    members.push_back(load_prediction_set(path, name));
    inputs.push_back({{"role", "predictions"},
                      {"model", members.back().model_name},
                      {"path", path.generic_string()},
                      {"sha256", sha256_file(path)}});
  }
  const auto input = EnsembleInput::create(std::move(members));
  const Corpus gold = load_corpus(options.gold, options.gold_format);
  inputs.push_back({{"role", "gold"},
                    {"path", options.gold.generic_string()},
                    {"sha256", sha256_file(options.gold)}});

  std::optional<FoldPlan> plan;
  if (options.folds) {
    plan = load_fold_plan(*options.folds);
    inputs.push_back({{"role", "folds"},
                      {"path", options.folds->generic_string()},
                      {"sha256", sha256_file(*options.folds)}});
  } else if (options.aggregation == Aggregation::kFoldAveraged) {
    invalid("fold-averaged aggregation requires a fold plan (--folds)");
  }
  const Json adapter = adapter_json(options.adapter_manifest);

  EnsembleOptions ens;
  ens.majority = options.method != EnsembleMethod::kHighestSum;
  ens.highest_sum = options.method != EnsembleMethod::kMajority;
  ens.tie = TiePolicy{options.tie, tie_seed(options.seed)};
  ens.scale = options.scale;
  ens.aggregation = options.aggregation;

  EnsembleRunSummary summary;
  summary.evaluation =
      evaluate_ensembles(input, gold, ens, plan ? &*plan : nullptr);

  OutputTree tree(options.out_dir.value_or(fs::path()));
  if (options.out_dir) {
    write_label_files(tree, summary.evaluation);
    write_tables(tree, "results", summary.evaluation.table);
  }

  Json manifest;
  manifest["tool"] = std::string(kTool);
  manifest["version"] = FOLDVOTE_VERSION;
  manifest["command"] = "ensemble";
  manifest["seed"] = options.seed;
  manifest["seed_derivation"] = std::string(kSeedDerivation);
  manifest["config"] = {
      {"method", std::string(to_string(options.method))},
      {"tie", std::string(to_string(options.tie))},
      {"scale", std::string(to_string(options.scale))},
      {"aggregation", std::string(to_string(options.aggregation))},
      {"gold_format", std::string(to_string(options.gold_format))}};
  manifest["inputs"] = std::move(inputs);
  manifest["aggregation"] = std::string(to_string(options.aggregation));
  manifest["zero_division"] = std::string(kZeroDivisionNote);
  manifest["majority_vote"] = tie_json(summary.evaluation, input.ids().size());
  if (!adapter.is_null()) manifest["adapter"] = adapter;
  manifest["outputs"] = tree.to_json();
  summary.manifest_json = manifest.dump(2) + "\n";
  if (options.out_dir) {
    write_text_file(*options.out_dir / "manifest.json", summary.manifest_json);
  }
  return summary;
}

}  // namespace foldvote
