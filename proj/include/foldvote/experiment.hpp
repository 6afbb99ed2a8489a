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

#ifndef FOLDVOTE_EXPERIMENT_HPP_
#define FOLDVOTE_EXPERIMENT_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foldvote/baseline_model.hpp"
#include "foldvote/corpus.hpp"
#include "foldvote/ensemble.hpp"
#include "foldvote/metrics.hpp"
#include "foldvote/report.hpp"

namespace foldvote {

struct EpochGrid {
  std::vector<int> epochs = {1, 2, 3, 4, 5};

  // "1,2,3", "1-5" or a mix such as "1-3,5".
  static EpochGrid parse(std::string_view text);
  std::string to_string() const;

  // Throws InvalidArgument unless nonempty and strictly increasing positive.
  void validate() const;
};

// A named baseline configuration, written as
//   name[:key=value[,key=value...]]
// with keys lr, l2, batch, ngram (e.g. 2-4) and max-features.
struct ModelSpec {
  std::string name = "baseline";
  baseline::FeatureOptions features;
  baseline::TrainConfig train;

  static ModelSpec parse(std::string_view text);
  std::string to_string() const;
};

// Letters, digits, '.', '_' and '-', not starting with '.'.
bool is_valid_model_name(std::string_view name);

struct EpochRecord {
  int epoch = 0;
  std::vector<ConfusionMatrix> fold_confusions;
  std::vector<MetricsReport> fold_metrics;
  MetricsReport pooled;
  MetricsReport fold_averaged;
  double mean_fold_f1 = 0.0;
};

struct CvResult {
  std::string model_name;
  std::vector<EpochRecord> per_epoch;
  int best_epoch = 0;
  Aggregation aggregation = Aggregation::kPooled;

  const EpochRecord& record(int epoch) const;
  const EpochRecord& best() const { return record(best_epoch); }
  // The pooled or fold-averaged report of `rec`, per `aggregation`.
  const MetricsReport& reported(const EpochRecord& rec) const;
};

struct CvOutcome {
  CvResult result;
  // Out-of-fold scores per epoch; each covers every corpus id exactly once.
  std::map<int, PredictionSet> out_of_fold;
};

// Argmax of mean fold F1; exact ties resolve to the smallest epoch.
int select_best_epoch(std::span<const int> epochs,
                      std::span<const double> mean_f1);

// Training seed of (model, fold): derive_seed(master, "train/<model>/<fold>").
Seed training_seed(Seed master, std::string_view model, std::uint32_t fold);

// For each model, fold and grid epoch: train on the other folds, score the
// held-out fold. Jobs run on up to `jobs` threads; results do not depend on
// the schedule.
std::vector<CvOutcome> run_cv(const Corpus& corpus, const FoldPlan& plan,
                              std::span<const ModelSpec> models,
                              const EpochGrid& grid, Seed master,
                              Aggregation aggregation, unsigned jobs = 1);

struct EnsembleOptions {
  bool majority = true;
  bool highest_sum = true;
  TiePolicy tie;
  ScoreScale scale = ScoreScale::kNormalized;
  Aggregation aggregation = Aggregation::kPooled;
};

inline constexpr std::string_view kMajorityVoteName = "Majority Vote";
inline constexpr std::string_view kHighestSumName = "Highest Sum";

// Tie seed used by runs: derive_seed(master, "majority-vote/ties").
Seed tie_seed(Seed master);

struct LabelEvaluation {
  MetricsReport metrics;
  ConfusionMatrix pooled_counts;
};

// Scores predicted labels against gold restricted to the predicted ids.
// Fold-averaged mode needs `plan` and averages over its nonempty folds.
// Throws IdSetMismatch when a predicted id is missing from gold or plan.
LabelEvaluation evaluate_labels(const LabelMap& gold, const LabelMap& predicted,
                                Aggregation aggregation,
                                const FoldPlan* plan = nullptr);

struct EnsembleEvaluation {
  ResultsTable table;
  std::optional<VoteOutcome> majority;
  std::optional<LabelMap> highest_sum;
};

// Rows for the requested ensembles plus one row per member model.
EnsembleEvaluation evaluate_ensembles(const EnsembleInput& input,
                                      const Corpus& gold,
                                      const EnsembleOptions& options,
                                      const FoldPlan* plan = nullptr);

std::vector<BestEpochRow> best_epoch_rows(std::span<const CvOutcome> outcomes);

}  // namespace foldvote

#endif  // FOLDVOTE_EXPERIMENT_HPP_
