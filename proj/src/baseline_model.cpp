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

#include "foldvote/baseline_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "foldvote/error.hpp"
#include "foldvote/text.hpp"
#include "json.hpp"

namespace foldvote::baseline {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

double softplus(double z) noexcept {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double dot(std::span<const double> w, const SparseVector& x) noexcept {
  double sum = 0.0;
  for (const auto& e : x) sum += w[e.index] * e.value;
  return sum;
}

struct Dataset {
  FeatureSpace space;
  std::vector<SparseVector> xs;
  std::vector<double> ys;
};

Dataset prepare(const Corpus& corpus, const FeatureOptions& features) {
  bool has_pos = false;
  bool has_neg = false;
  std::vector<std::string> normalized;
  normalized.reserve(corpus.size());
  for (const auto& ex : corpus.examples()) {
    (ex.label == kPositiveLabel ? has_pos : has_neg) = true;
    normalized.push_back(text::normalize_text(ex.text));
  }
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kSingleClassCorpus,
                "training corpus '" + corpus.name() +
                    "' must contain both classes");
  }
  Dataset data;
  data.space = FeatureSpace::build(normalized, features);
  data.xs.reserve(normalized.size());
  for (const auto& t : normalized) data.xs.push_back(data.space.featurize(t));
  for (const auto& ex : corpus.examples()) {
    data.ys.push_back(ex.label == kPositiveLabel ? 1.0 : 0.0);
  }
  return data;
}

}  // namespace

void FeatureOptions::validate() const {
  if (ngram_min < 1 || ngram_max < ngram_min) {
    invalid("n-gram lengths must satisfy 1 <= min <= max");
  }
  if (max_features < 1) invalid("max_features must be at least 1");
}

FeatureSpace FeatureSpace::build(std::span<const std::string> texts,
                                 const FeatureOptions& options) {
  options.validate();
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& t : texts) {
    for (auto gram : text::char_ngrams(t, options.ngram_min, options.ngram_max)) {
      ++counts[gram];
    }
  }
  std::vector<std::pair<std::string_view, std::uint64_t>> ranked(
      counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > options.max_features) ranked.resize(options.max_features);
  std::vector<std::string> vocabulary;
  vocabulary.reserve(ranked.size());
  for (const auto& [gram, count] : ranked) vocabulary.emplace_back(gram);
  return from_vocabulary(std::move(vocabulary), options);
}

FeatureSpace FeatureSpace::from_vocabulary(std::vector<std::string> vocabulary,
                                           const FeatureOptions& options) {
  options.validate();
  FeatureSpace space;
  space.options_ = options;
  space.vocabulary_ = std::move(vocabulary);
  space.index_.reserve(space.vocabulary_.size());
  for (std::size_t i = 0; i < space.vocabulary_.size(); ++i) {
    if (!space.index_.emplace(space.vocabulary_[i], static_cast<std::uint32_t>(i))
             .second) {
      invalid("duplicate vocabulary entry");
    }
  }
  return space;
}

SparseVector FeatureSpace::featurize(std::string_view text) const {
  std::vector<std::uint32_t> hits;
  std::string key;
  for (auto gram : text::char_ngrams(text, options_.ngram_min, options_.ngram_max)) {
    key.assign(gram);
    const auto it = index_.find(key);
    if (it != index_.end()) hits.push_back(it->second);
  }
  std::sort(hits.begin(), hits.end());
  SparseVector x;
  for (auto idx : hits) {
    if (!x.empty() && x.back().index == idx) {
      x.back().value += 1.0;
    } else {
      x.push_back({idx, 1.0});
    }
  }
  return x;
}

void TrainConfig::validate() const {
  if (!(std::isfinite(learning_rate) && learning_rate > 0.0)) {
    invalid("learning rate must be finite and positive");
  }
  if (epochs < 1) invalid("epochs must be at least 1");
  if (!(std::isfinite(l2) && l2 >= 0.0)) {
    invalid("l2 must be finite and non-negative");
  }
  if (batch_size < 1) invalid("batch size must be at least 1");
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double objective(std::span<const double> weights, double bias,
                 std::span<const SparseVector> xs, std::span<const double> ys,
                 double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double z = bias + dot(weights, xs[i]);
    loss += softplus(z) - ys[i] * z;
  }
  if (!xs.empty()) loss /= static_cast<double>(xs.size());
  double norm2 = 0.0;
  for (double w : weights) norm2 += w * w;
  return loss + 0.5 * l2 * norm2;
}

void objective_gradient(std::span<const double> weights, double bias,
                        std::span<const SparseVector> xs,
                        std::span<const double> ys, double l2,
                        std::span<double> grad_weights, double& grad_bias) {
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_bias = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double residual = sigmoid(bias + dot(weights, xs[i])) - ys[i];
    grad_bias += residual;
    for (const auto& e : xs[i]) grad_weights[e.index] += residual * e.value;
  }
  const double inv = xs.empty() ? 0.0 : 1.0 / static_cast<double>(xs.size());
  grad_bias *= inv;
  for (std::size_t j = 0; j < grad_weights.size(); ++j) {
    grad_weights[j] = grad_weights[j] * inv + l2 * weights[j];
  }
}

BaselineModel::BaselineModel(FeatureSpace space, TrainConfig config)
    : space_(std::move(space)),
      config_(config),
      weights_(space_.size(), 0.0) {}

BaselineModel::BaselineModel(FeatureSpace space, TrainConfig config,
                             std::vector<double> weights, double bias)
    : space_(std::move(space)),
      config_(config),
      weights_(std::move(weights)),
      bias_(bias) {
  if (weights_.size() != space_.size()) {
    invalid("weight vector length does not match the vocabulary");
  }
  if (!std::isfinite(bias_) ||
      !std::all_of(weights_.begin(), weights_.end(),
                   [](double w) { return std::isfinite(w); })) {
    invalid("model parameters must be finite");
  }
}

double BaselineModel::margin(const SparseVector& x) const {
  return bias_ + dot(weights_, x);
}

ScoreVector BaselineModel::predict_scores(std::string_view text) const {
  const double p =
      sigmoid(margin(space_.featurize(text::normalize_text(text))));
  return ScoreVector{1.0 - p, p};
}

PredictionSet BaselineModel::predict(const Corpus& corpus,
                                     std::string model_name) const {
  PredictionSet out;
  out.model_name = std::move(model_name);
  for (const auto& ex : corpus.examples()) {
    out.scores.emplace(ex.id, predict_scores(ex.text));
  }
  return out;
}

std::string BaselineModel::to_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = "char-ngram-logistic-regression";
  j["train_config"] = {{"learning_rate", config_.learning_rate},
                       {"epochs", config_.epochs},
                       {"l2", config_.l2},
                       {"seed", config_.seed},
                       {"batch_size", config_.batch_size}};
  const auto& opt = space_.options();
  j["features"] = {{"ngram_min", opt.ngram_min},
                   {"ngram_max", opt.ngram_max},
                   {"max_features", opt.max_features},
                   {"vocabulary", space_.vocabulary()}};
  j["bias"] = bias_;
  j["weights"] = weights_;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

BaselineModel BaselineModel::from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      invalid("unsupported model format_version " + std::to_string(version));
    }
    TrainConfig config;
    const auto& tc = j.at("train_config");
    config.learning_rate = tc.at("learning_rate").get<double>();
    config.epochs = tc.at("epochs").get<int>();
    config.l2 = tc.at("l2").get<double>();
    config.seed = tc.at("seed").get<Seed>();
    config.batch_size = tc.at("batch_size").get<int>();
    config.validate();
    FeatureOptions options;
    const auto& f = j.at("features");
    options.ngram_min = f.at("ngram_min").get<int>();
    options.ngram_max = f.at("ngram_max").get<int>();
    options.max_features = f.at("max_features").get<std::size_t>();
    auto space = FeatureSpace::from_vocabulary(
        f.at("vocabulary").get<std::vector<std::string>>(), options);
    return BaselineModel(std::move(space), config,
                         j.at("weights").get<std::vector<double>>(),
                         j.at("bias").get<double>());
  } catch (const nlohmann::json::exception& e) {
    invalid(std::string("malformed model file: ") + e.what());
  }
}

void BaselineModel::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << to_json() << '\n';
}

BaselineModel BaselineModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  const std::string body{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  return from_json(body);
}

std::vector<BaselineModel> train_snapshots(const Corpus& corpus,
                                           const FeatureOptions& features,
                                           const TrainConfig& config,
                                           std::span<const int> epochs) {
  if (epochs.empty()) invalid("no snapshot epochs requested");
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (epochs[i] < 1 || (i > 0 && epochs[i] <= epochs[i - 1])) {
      invalid("snapshot epochs must be strictly increasing positive integers");
    }
  }
  TrainConfig effective = config;
  effective.epochs = epochs.back();
  effective.validate();

  Dataset data = prepare(corpus, features);
  const std::size_t n = data.xs.size();
  const std::size_t dim = data.space.size();
  const auto batch = static_cast<std::size_t>(effective.batch_size);
  const double lr = effective.learning_rate;
  const double l2 = effective.l2;

  std::vector<double> w(dim, 0.0);
  std::vector<double> grad(dim, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<char> is_touched(dim, 0);
  double b = 0.0;

  std::vector<BaselineModel> snapshots;
  std::size_t next_snapshot = 0;
  std::vector<std::size_t> order(n);
  for (int epoch = 1; epoch <= effective.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng(derive_seed(effective.seed, "epoch/" + std::to_string(epoch)))
        .shuffle(order);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      double grad_b = 0.0;
      // Residuals use the parameters from before this batch's update.
      for (std::size_t t = start; t < end; ++t) {
        const std::size_t i = order[t];
        const double residual = sigmoid(b + dot(w, data.xs[i])) - data.ys[i];
        grad_b += residual;
        for (const auto& e : data.xs[i]) {
          if (!is_touched[e.index]) {
            is_touched[e.index] = 1;
            touched.push_back(e.index);
          }
          grad[e.index] += residual * e.value;
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      if (l2 > 0.0) {
        for (std::size_t j = 0; j < dim; ++j) {
          w[j] -= lr * (grad[j] * inv + l2 * w[j]);
        }
      } else {
        for (auto j : touched) w[j] -= lr * (grad[j] * inv);
      }
      b -= lr * grad_b * inv;
      for (auto j : touched) {
        grad[j] = 0.0;
        is_touched[j] = 0;
      }
      touched.clear();
    }
    if (next_snapshot < epochs.size() && epochs[next_snapshot] == epoch) {
      TrainConfig snapshot_config = config;
      snapshot_config.epochs = epoch;
      snapshots.emplace_back(data.space, snapshot_config, w, b);
      ++next_snapshot;
    }
  }
  return snapshots;
}

BaselineModel train(const Corpus& corpus, const FeatureOptions& features,
                    const TrainConfig& config) {
  config.validate();
  const int epochs[] = {config.epochs};
  return std::move(train_snapshots(corpus, features, config, epochs).front());
}

double training_loss(const BaselineModel& model, const Corpus& corpus) {
  std::vector<SparseVector> xs;
  std::vector<double> ys;
  for (const auto& ex : corpus.examples()) {
    xs.push_back(model.feature_space().featurize(text::normalize_text(ex.text)));
    ys.push_back(ex.label == kPositiveLabel ? 1.0 : 0.0);
  }
  return objective(model.weights(), model.bias(), xs, ys, model.config().l2);
}

}  // namespace foldvote::baseline
