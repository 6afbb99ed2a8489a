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

#ifndef FOLDVOTE_ENSEMBLE_HPP_
#define FOLDVOTE_ENSEMBLE_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foldvote/corpus.hpp"
#include "foldvote/random.hpp"

namespace foldvote {

struct ScoreVector {
  double not_hateful = 0.0;
  double hateful = 0.0;

  friend bool operator==(const ScoreVector&, const ScoreVector&) = default;
};

// Finite and non-negative in both components.
bool is_valid(const ScoreVector& sv) noexcept;

// Projects onto the probability simplex. Throws DegenerateScores when a
// component is negative or non-finite, or both are zero.
ScoreVector normalize(const ScoreVector& sv);

// Argmax with an exact tie resolving to Hateful.
Label hard_label(const ScoreVector& sv) noexcept;

using ScoreMap = std::map<std::string, ScoreVector>;

struct PredictionSet {
  std::string model_name;
  ScoreMap scores;
};

LabelMap hard_labels(const PredictionSet& predictions);

// Members sharing one id set, with unique nonempty model names.
class EnsembleInput {
 public:
  // Throws InvalidArgument (no members, empty or duplicate names, empty id
  // set) or IdSetMismatch listing up to 10 differing ids.
  static EnsembleInput create(std::vector<PredictionSet> members);

  std::span<const PredictionSet> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::vector<std::string> ids() const;

 private:
  std::vector<PredictionSet> members_;
};

enum class TieKind { kSeededRandom, kFixedPositive };

struct TiePolicy {
  TieKind kind = TieKind::kSeededRandom;
  Seed seed = 0;
};

std::optional<TieKind> parse_tie_kind(std::string_view name);
std::string_view to_string(TieKind kind);

// Resolution of an exact vote tie for `id`; a pure function of (seed, id).
Label resolve_tie(const TiePolicy& policy, std::string_view id);

struct VoteOutcome {
  LabelMap labels;
  std::size_t tie_count = 0;
};

// Each member casts hard_label(score); strictly more votes wins, exact ties
// go through `policy`. Throws DegenerateScores naming (model, id).
VoteOutcome majority_vote(const EnsembleInput& input, const TiePolicy& policy);

enum class ScoreScale { kNormalized, kRaw };

std::optional<ScoreScale> parse_score_scale(std::string_view name);
std::string_view to_string(ScoreScale scale);

// Per id: sum each class's (normalized, by default) score over members and
// take the argmax; an exact tie resolves to Hateful.
LabelMap highest_sum(const EnsembleInput& input,
                     ScoreScale scale = ScoreScale::kNormalized);

// Prediction files: `id<TAB>score_not_hateful<TAB>score_hateful` after a
// header of the same names. Scores are written in shortest round-trip form.
PredictionSet read_prediction_set(std::istream& in, std::string model_name);
PredictionSet load_prediction_set(const std::filesystem::path& path,
                                  std::optional<std::string> model_name = {});
void write_prediction_set(const PredictionSet& predictions, std::ostream& out);
void save_prediction_set(const PredictionSet& predictions,
                         const std::filesystem::path& path);

// "<name>.pred.tsv" -> "<name>"; any other file name drops its extension.
std::string model_name_from_path(const std::filesystem::path& path);

// `id<TAB>label` with canonical label tokens.
void write_label_map(const LabelMap& labels, std::ostream& out);
void save_label_map(const LabelMap& labels, const std::filesystem::path& path);

}  // namespace foldvote

#endif  // FOLDVOTE_ENSEMBLE_HPP_
