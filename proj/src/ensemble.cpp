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

#include "foldvote/ensemble.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "foldvote/error.hpp"
#include "foldvote/format.hpp"

namespace foldvote {
namespace {

constexpr std::string_view kPredictionHeader =
    "id\tscore_not_hateful\tscore_hateful";
constexpr std::string_view kPredictionSuffix = ".pred.tsv";

[[noreturn]] void degenerate(const std::string& model, const std::string& id) {
  throw Error(ErrorCode::kDegenerateScores,
              "model '" + model + "', id '" + id + "'");
}

double parse_score(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kMalformedRow, "line " + std::to_string(line_no) +
                                              ": bad score '" +
                                              std::string(field) + "'");
  }
  return value;
}

}  // namespace

bool is_valid(const ScoreVector& sv) noexcept {
  return std::isfinite(sv.not_hateful) && std::isfinite(sv.hateful) &&
         sv.not_hateful >= 0.0 && sv.hateful >= 0.0;
}

ScoreVector normalize(const ScoreVector& sv) {
  if (!is_valid(sv) || sv.not_hateful + sv.hateful <= 0.0) {
    throw Error(ErrorCode::kDegenerateScores,
                "scores must be finite, non-negative and not both zero");
  }
  const double sum = sv.not_hateful + sv.hateful;
  return ScoreVector{sv.not_hateful / sum, sv.hateful / sum};
}

Label hard_label(const ScoreVector& sv) noexcept {
  return sv.hateful >= sv.not_hateful ? Label::kHateful : Label::kNotHateful;
}

LabelMap hard_labels(const PredictionSet& predictions) {
  LabelMap out;
  for (const auto& [id, sv] : predictions.scores) {
    if (!is_valid(sv)) degenerate(predictions.model_name, id);
    out.emplace_hint(out.end(), id, hard_label(sv));
  }
  return out;
}

EnsembleInput EnsembleInput::create(std::vector<PredictionSet> members) {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ensemble needs at least one member");
  }
  std::set<std::string> names;
  for (const auto& m : members) {
    if (m.model_name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "model name must be nonempty");
    }
    if (!names.insert(m.model_name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate model name '" + m.model_name + "'");
    }
  }
  const auto& reference = members.front();
  if (reference.scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "model '" + reference.model_name + "' has no predictions");
  }
  for (std::size_t i = 1; i < members.size(); ++i) {
    const auto& other = members[i].scores;
    std::vector<std::string> differing;
    std::size_t n_differing = 0;
    auto a = reference.scores.begin();
    auto b = other.begin();
    auto note = [&](const std::string& id) {
      if (differing.size() < 10) differing.push_back(id);
      ++n_differing;
    };
    while (a != reference.scores.end() || b != other.end()) {
      if (b == other.end() ||
          (a != reference.scores.end() && a->first < b->first)) {
        note((a++)->first);
      } else if (a == reference.scores.end() || b->first < a->first) {
        note((b++)->first);
      } else {
        ++a;
        ++b;
      }
    }
    if (n_differing > 0) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "models '" + reference.model_name + "' and '" +
                      members[i].model_name + "' differ in " +
                      std::to_string(n_differing) + " ids",
                  std::move(differing));
    }
  }
  EnsembleInput input;
  input.members_ = std::move(members);
  return input;
}

std::vector<std::string> EnsembleInput::ids() const {
  std::vector<std::string> out;
  out.reserve(members_.front().scores.size());
  for (const auto& [id, sv] : members_.front().scores) out.push_back(id);
  return out;
}

std::optional<TieKind> parse_tie_kind(std::string_view name) {
  if (name == "random" || name == "seeded_random") return TieKind::kSeededRandom;
  if (name == "positive" || name == "fixed_positive") {
    return TieKind::kFixedPositive;
  }
  return std::nullopt;
}

std::string_view to_string(TieKind kind) {
  return kind == TieKind::kSeededRandom ? "random" : "positive";
}

Label resolve_tie(const TiePolicy& policy, std::string_view id) {
  if (policy.kind == TieKind::kFixedPositive) return Label::kHateful;
  // Top bit of a (seed, id) hash: a fair coin that ignores iteration order.
  return (derive_seed(policy.seed, id) >> 63) != 0 ? Label::kHateful
                                                   : Label::kNotHateful;
}

VoteOutcome majority_vote(const EnsembleInput& input, const TiePolicy& policy) {
  VoteOutcome outcome;
  const auto members = input.members();
  for (const auto& [id, unused] : members.front().scores) {
    std::size_t hateful_votes = 0;
    for (const auto& m : members) {
      const auto& sv = m.scores.at(id);
      if (!is_valid(sv)) degenerate(m.model_name, id);
      if (hard_label(sv) == Label::kHateful) ++hateful_votes;
    }
    const std::size_t other_votes = members.size() - hateful_votes;
    Label label;
    if (hateful_votes > other_votes) {
      label = Label::kHateful;
    } else if (other_votes > hateful_votes) {
      label = Label::kNotHateful;
    } else {
      label = resolve_tie(policy, id);
      ++outcome.tie_count;
    }
    outcome.labels.emplace_hint(outcome.labels.end(), id, label);
  }
  return outcome;
}

std::optional<ScoreScale> parse_score_scale(std::string_view name) {
  if (name == "normalized") return ScoreScale::kNormalized;
  if (name == "raw") return ScoreScale::kRaw;
  return std::nullopt;
}

std::string_view to_string(ScoreScale scale) {
  return scale == ScoreScale::kNormalized ? "normalized" : "raw";
}

LabelMap highest_sum(const EnsembleInput& input, ScoreScale scale) {
  LabelMap out;
  const auto members = input.members();
  for (const auto& [id, unused] : members.front().scores) {
    double sum_not = 0.0;
    double sum_hate = 0.0;
    for (const auto& m : members) {
      ScoreVector sv = m.scores.at(id);
      if (!is_valid(sv)) degenerate(m.model_name, id);
      if (scale == ScoreScale::kNormalized) {
        if (sv.not_hateful + sv.hateful <= 0.0) degenerate(m.model_name, id);
        sv = normalize(sv);
      }
      sum_not += sv.not_hateful;
      sum_hate += sv.hateful;
    }
    out.emplace_hint(out.end(), id,
                     sum_hate >= sum_not ? Label::kHateful : Label::kNotHateful);
  }
  return out;
}

PredictionSet read_prediction_set(std::istream& in, std::string model_name) {
  PredictionSet set;
  set.model_name = std::move(model_name);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedRow, "line 1: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPredictionHeader) {
    throw Error(ErrorCode::kMalformedRow,
                "line 1: expected header "
                "'id<TAB>score_not_hateful<TAB>score_hateful'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view(line);
    const auto t1 = view.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : view.find('\t', t1 + 1);
    if (t2 == std::string_view::npos ||
        view.find('\t', t2 + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) +
                      ": expected 3 tab-separated fields");
    }
    const auto id = view.substr(0, t1);
    if (!is_valid_id(id)) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_no) + ": invalid id");
    }
    ScoreVector sv{parse_score(view.substr(t1 + 1, t2 - t1 - 1), line_no),
                   parse_score(view.substr(t2 + 1), line_no)};
    if (!is_valid(sv)) {
      throw Error(ErrorCode::kDegenerateScores,
                  "line " + std::to_string(line_no) + ": model '" +
                      set.model_name + "', id '" + std::string(id) +
                      "': scores must be finite and non-negative");
    }
    if (!set.scores.emplace(std::string(id), sv).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "line " + std::to_string(line_no) + ": duplicate id '" +
                      std::string(id) + "'",
                  {std::string(id)});
    }
  }
  return set;
}

PredictionSet load_prediction_set(const std::filesystem::path& path,
                                  std::optional<std::string> model_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  try {
    return read_prediction_set(
        in, model_name ? *model_name : model_name_from_path(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message(), e.details());
  }
}

void write_prediction_set(const PredictionSet& predictions, std::ostream& out) {
  out << kPredictionHeader << '\n';
  for (const auto& [id, sv] : predictions.scores) {
    out << id << '\t' << format_shortest(sv.not_hateful) << '\t'
        << format_shortest(sv.hateful) << '\n';
  }
}

void save_prediction_set(const PredictionSet& predictions,
                         const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  write_prediction_set(predictions, out);
}

std::string model_name_from_path(const std::filesystem::path& path) {
  const auto file = path.filename().string();
  if (file.size() > kPredictionSuffix.size() &&
      file.ends_with(kPredictionSuffix)) {
    return file.substr(0, file.size() - kPredictionSuffix.size());
  }
  return path.stem().string();
}

void write_label_map(const LabelMap& labels, std::ostream& out) {
  out << "id\tlabel\n";
  for (const auto& [id, label] : labels) {
    out << id << '\t' << label_token(label) << '\n';
  }
}

void save_label_map(const LabelMap& labels, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  write_label_map(labels, out);
}

}  // namespace foldvote
