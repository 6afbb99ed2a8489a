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

#ifndef FOLDVOTE_METRICS_HPP_
#define FOLDVOTE_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "foldvote/corpus.hpp"

namespace foldvote {

// Binary tallies with Hateful as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  void add(Label gold, Label predicted) noexcept;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;
  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// How per-fold results are combined into one row.
//   pooled:        metrics of the summed confusion matrices
//   fold_averaged: arithmetic mean of each per-fold metric
enum class Aggregation { kPooled, kFoldAveraged };

std::optional<Aggregation> parse_aggregation(std::string_view name);
std::string_view to_string(Aggregation mode);

inline constexpr std::string_view kZeroDivisionNote =
    "metrics whose denominator is zero are reported as 0";

// Throws IdSetMismatch (details: up to 10 differing ids) or EmptyEvaluation.
ConfusionMatrix confusion(const LabelMap& gold, const LabelMap& predicted);

// Harmonic mean of precision and recall; 0 when both are 0.
double harmonic_f1(double precision, double recall) noexcept;

// Throws EmptyEvaluation on an all-zero matrix.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

// The matrix obtained by treating NotHateful as the positive class.
ConfusionMatrix swap_positive_class(const ConfusionMatrix& cm) noexcept;

MetricsReport pooled_metrics(std::span<const ConfusionMatrix> folds);
MetricsReport fold_averaged_metrics(std::span<const MetricsReport> folds);

// Keys precision, recall, f1, accuracy, tp, fp, fn, tn.
std::string metrics_json(const MetricsReport& report, const ConfusionMatrix& cm);

}  // namespace foldvote

#endif  // FOLDVOTE_METRICS_HPP_
