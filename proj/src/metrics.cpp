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

#include "foldvote/metrics.hpp"

#include "foldvote/error.hpp"
#include "json.hpp"

namespace foldvote {
namespace {

double ratio(std::uint64_t num, std::uint64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ConfusionMatrix::add(Label gold, Label predicted) noexcept {
  const bool g = gold == kPositiveLabel;
  const bool p = predicted == kPositiveLabel;
  if (g && p) {
    ++tp;
  } else if (!g && p) {
    ++fp;
  } else if (g && !p) {
    ++fn;
  } else {
    ++tn;
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(
    const ConfusionMatrix& other) noexcept {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "pooled") return Aggregation::kPooled;
  if (name == "fold-averaged" || name == "fold_averaged") {
    return Aggregation::kFoldAveraged;
  }
  return std::nullopt;
}

std::string_view to_string(Aggregation mode) {
  return mode == Aggregation::kPooled ? "pooled" : "fold-averaged";
}

ConfusionMatrix confusion(const LabelMap& gold, const LabelMap& predicted) {
  // Both maps are ordered, so one merge pass finds the symmetric difference.
  std::vector<std::string> differing;
  std::size_t n_differing = 0;
  ConfusionMatrix cm;
  auto g = gold.begin();
  auto p = predicted.begin();
  auto note = [&](const std::string& id) {
    if (differing.size() < 10) differing.push_back(id);
    ++n_differing;
  };
  while (g != gold.end() || p != predicted.end()) {
    if (p == predicted.end() || (g != gold.end() && g->first < p->first)) {
      note(g->first);
      ++g;
    } else if (g == gold.end() || p->first < g->first) {
      note(p->first);
      ++p;
    } else {
      cm.add(g->second, p->second);
      ++g;
      ++p;
    }
  }
  if (n_differing > 0) {
    throw Error(ErrorCode::kIdSetMismatch,
                "id sets differ in " + std::to_string(n_differing) + " ids",
                std::move(differing));
  }
  if (cm.total() == 0) {
    throw Error(ErrorCode::kEmptyEvaluation, "no examples to evaluate");
  }
  return cm;
}

double harmonic_f1(double precision, double recall) noexcept {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw Error(ErrorCode::kEmptyEvaluation, "confusion matrix is empty");
  }
  MetricsReport r;
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.recall = ratio(cm.tp, cm.tp + cm.fn);
  r.f1 = harmonic_f1(r.precision, r.recall);
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return r;
}

ConfusionMatrix swap_positive_class(const ConfusionMatrix& cm) noexcept {
  return ConfusionMatrix{cm.tn, cm.fn, cm.fp, cm.tp};
}

MetricsReport pooled_metrics(std::span<const ConfusionMatrix> folds) {
  ConfusionMatrix sum;
  for (const auto& cm : folds) sum += cm;
  return compute_metrics(sum);
}

MetricsReport fold_averaged_metrics(std::span<const MetricsReport> folds) {
  if (folds.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no folds to average");
  }
  MetricsReport mean;
  for (const auto& r : folds) {
    mean.precision += r.precision;
    mean.recall += r.recall;
    mean.f1 += r.f1;
    mean.accuracy += r.accuracy;
  }
  const auto k = static_cast<double>(folds.size());
  mean.precision /= k;
  mean.recall /= k;
  mean.f1 /= k;
  mean.accuracy /= k;
  return mean;
}

std::string metrics_json(const MetricsReport& report,
                         const ConfusionMatrix& cm) {
  nlohmann::json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["accuracy"] = report.accuracy;
  j["tp"] = cm.tp;
  j["fp"] = cm.fp;
  j["fn"] = cm.fn;
  j["tn"] = cm.tn;
  return j.dump();
}

}  // namespace foldvote
