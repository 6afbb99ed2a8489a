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

#ifndef FOLDVOTE_BASELINE_MODEL_HPP_
#define FOLDVOTE_BASELINE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foldvote/corpus.hpp"
#include "foldvote/ensemble.hpp"
#include "foldvote/random.hpp"

namespace foldvote::baseline {

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// Sorted by index, no repeated indices.
using SparseVector = std::vector<SparseEntry>;

struct FeatureOptions {
  int ngram_min = 2;
  int ngram_max = 4;
  std::size_t max_features = std::size_t{1} << 18;

  void validate() const;
};

// Character n-gram vocabulary. Indices are dense and ordered by descending
// training-corpus frequency, ties broken by byte order of the n-gram.
class FeatureSpace {
 public:
  FeatureSpace() = default;

  static FeatureSpace build(std::span<const std::string> texts,
                            const FeatureOptions& options);
  static FeatureSpace from_vocabulary(std::vector<std::string> vocabulary,
                                      const FeatureOptions& options);

  // Counts of in-vocabulary n-grams of `text` (no normalization applied).
  SparseVector featurize(std::string_view text) const;

  const FeatureOptions& options() const noexcept { return options_; }
  std::span<const std::string> vocabulary() const noexcept { return vocabulary_; }
  std::size_t size() const noexcept { return vocabulary_.size(); }

 private:
  FeatureOptions options_;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 5;
  double l2 = 1e-6;
  Seed seed = 0;
  int batch_size = 18;

  void validate() const;
};

double sigmoid(double z) noexcept;

// Mean logistic loss over the batch plus (l2 / 2) * ||w||^2 (bias is not
// penalized). Labels are 0 or 1.
double objective(std::span<const double> weights, double bias,
                 std::span<const SparseVector> xs, std::span<const double> ys,
                 double l2);

// Gradient of `objective`. grad_weights must have weights.size() entries.
void objective_gradient(std::span<const double> weights, double bias,
                        std::span<const SparseVector> xs,
                        std::span<const double> ys, double l2,
                        std::span<double> grad_weights, double& grad_bias);

class BaselineModel {
 public:
  // All-zero weights; scores every text as (0.5, 0.5).
  BaselineModel(FeatureSpace space, TrainConfig config);
  BaselineModel(FeatureSpace space, TrainConfig config,
                std::vector<double> weights, double bias);

  double margin(const SparseVector& x) const;
  ScoreVector predict_scores(std::string_view text) const;
  PredictionSet predict(const Corpus& corpus, std::string model_name) const;

  const FeatureSpace& feature_space() const noexcept { return space_; }
  const TrainConfig& config() const noexcept { return config_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }

  // JSON document with a format_version field.
  std::string to_json() const;
  static BaselineModel from_json(std::string_view json);
  void save(const std::filesystem::path& path) const;
  static BaselineModel load(const std::filesystem::path& path);

 private:
  FeatureSpace space_;
  TrainConfig config_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

inline constexpr int kModelFormatVersion = 1;

// Mini-batch SGD from zero weights. The example order of epoch e is a
// shuffle seeded by derive_seed(config.seed, "epoch/<e>"), so a run of E
// epochs is a prefix of any longer run. Throws SingleClassCorpus.
BaselineModel train(const Corpus& corpus, const FeatureOptions& features,
                    const TrainConfig& config);

// One training pass that returns a copy of the model after each requested
// epoch count (strictly increasing). config.epochs is ignored.
std::vector<BaselineModel> train_snapshots(const Corpus& corpus,
                                           const FeatureOptions& features,
                                           const TrainConfig& config,
                                           std::span<const int> epochs);

// Full-batch objective of `model` on `corpus` with the model's own l2.
double training_loss(const BaselineModel& model, const Corpus& corpus);

}  // namespace foldvote::baseline

#endif  // FOLDVOTE_BASELINE_MODEL_HPP_
