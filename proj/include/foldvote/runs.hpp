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

#ifndef FOLDVOTE_RUNS_HPP_
#define FOLDVOTE_RUNS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "foldvote/corpus.hpp"
#include "foldvote/ensemble.hpp"
#include "foldvote/experiment.hpp"
#include "foldvote/metrics.hpp"

namespace foldvote {

// Everything that determines a cross-validation run. Run directories are
// <out_root>/<run_id>; run_id defaults to "seed-<seed>".
struct CvRunOptions {
  std::filesystem::path input;
  CorpusFormat format = CorpusFormat::kTsv;
  std::uint32_t k = 5;
  EpochGrid grid;
  std::vector<ModelSpec> models = {ModelSpec{}};
  Seed seed = 0;
  bool stratified = true;
  Aggregation aggregation = Aggregation::kPooled;
  TieKind tie = TieKind::kSeededRandom;
  ScoreScale scale = ScoreScale::kNormalized;
  std::filesystem::path out_root = "runs";
  std::string run_id;
  unsigned jobs = 1;
  // Replace an existing nonempty run directory instead of failing.
  bool overwrite = false;
  std::optional<std::filesystem::path> adapter_manifest;
};

struct CvRunSummary {
  std::filesystem::path run_dir;
  std::vector<CvOutcome> outcomes;
  EnsembleEvaluation ensembles;
  bool stratified = true;
};

// Layout under run_dir:
//   manifest.json, folds.tsv,
//   preds/<model>/<epoch>.pred.tsv, best/<model>.pred.tsv, cv/<model>.json,
//   tables/best_epochs.{txt,tsv,json}, tables/results.{txt,tsv,json},
//   labels/majority_vote.tsv, labels/highest_sum.tsv
// Ensembles combine each model's out-of-fold scores at its best epoch.
CvRunSummary run_cv_experiment(const CvRunOptions& options);

// Options recorded in a cv manifest. Fails with DigestMismatch when the input
// corpus no longer matches the recorded digest.
CvRunOptions cv_options_from_manifest(const std::filesystem::path& manifest);

enum class EnsembleMethod { kMajority, kHighestSum, kBoth };

std::optional<EnsembleMethod> parse_ensemble_method(std::string_view name);
std::string_view to_string(EnsembleMethod method);

struct EnsembleRunOptions {
  // "path" or "name=path"; without a name the file stem minus ".pred.tsv"
  // names the model.
  std::vector<std::string> predictions;
  std::filesystem::path gold;
  CorpusFormat gold_format = CorpusFormat::kTsv;
  EnsembleMethod method = EnsembleMethod::kBoth;
  TieKind tie = TieKind::kSeededRandom;
  Seed seed = 0;
  Aggregation aggregation = Aggregation::kPooled;
  ScoreScale scale = ScoreScale::kNormalized;
  // Required for fold-averaged aggregation.
  std::optional<std::filesystem::path> folds;
  // When set, receives labels/, tables/ and manifest.json.
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> adapter_manifest;
};

struct EnsembleRunSummary {
  EnsembleEvaluation evaluation;
  std::string manifest_json;
};

EnsembleRunSummary run_ensemble(const EnsembleRunOptions& options);

}  // namespace foldvote

#endif  // FOLDVOTE_RUNS_HPP_
