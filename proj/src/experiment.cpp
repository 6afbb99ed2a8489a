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

#include "foldvote/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <set>
#include <thread>

#include "foldvote/error.hpp"
#include "foldvote/format.hpp"

namespace foldvote {
namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

template <typename T>
T parse_number(std::string_view field, std::string_view what) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    invalid("bad " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos
                                        ? std::string_view::npos
                                        : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

// Runs job(i) for i in [0, count) on up to `threads` workers. The first
// failing job by index is rethrown, whatever the schedule.
template <typename Job>
void run_jobs(std::size_t count, unsigned threads, Job job) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t i) {
    try {
      job(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

EpochGrid EpochGrid::parse(std::string_view text) {
  EpochGrid grid;
  grid.epochs.clear();
  for (auto part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      grid.epochs.push_back(parse_number<int>(part, "epoch"));
      continue;
    }
    const int lo = parse_number<int>(part.substr(0, dash), "epoch");
    const int hi = parse_number<int>(part.substr(dash + 1), "epoch");
    if (hi < lo) invalid("descending epoch range '" + std::string(part) + "'");
    for (int e = lo; e <= hi; ++e) grid.epochs.push_back(e);
  }
  grid.validate();
  return grid;
}

std::string EpochGrid::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(epochs[i]);
  }
  return out;
}

void EpochGrid::validate() const {
  if (epochs.empty()) invalid("epoch grid is empty");
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    if (epochs[i] < 1 || (i > 0 && epochs[i] <= epochs[i - 1])) {
      invalid("epoch grid must be strictly increasing positive integers");
    }
  }
}

bool is_valid_model_name(std::string_view name) {
  if (name.empty() || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
  });
}

ModelSpec ModelSpec::parse(std::string_view text) {
  ModelSpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  if (!is_valid_model_name(spec.name)) {
    invalid("invalid model name '" + spec.name + "'");
  }
  if (colon != std::string_view::npos && colon + 1 < text.size()) {
    for (auto item : split(text.substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        invalid("expected key=value in model spec, got '" + std::string(item) +
                "'");
      }
      const auto key = item.substr(0, eq);
      const auto value = item.substr(eq + 1);
      if (key == "lr") {
        spec.train.learning_rate = parse_number<double>(value, "lr");
      } else if (key == "l2") {
        spec.train.l2 = parse_number<double>(value, "l2");
      } else if (key == "batch") {
        spec.train.batch_size = parse_number<int>(value, "batch");
      } else if (key == "max-features") {
        spec.features.max_features =
            parse_number<std::size_t>(value, "max-features");
      } else if (key == "ngram") {
        const auto dash = value.find('-');
        if (dash == std::string_view::npos) {
          spec.features.ngram_min = spec.features.ngram_max =
              parse_number<int>(value, "ngram");
        } else {
          spec.features.ngram_min =
              parse_number<int>(value.substr(0, dash), "ngram");
          spec.features.ngram_max =
              parse_number<int>(value.substr(dash + 1), "ngram");
        }
      } else {
        invalid("unknown model spec key '" + std::string(key) + "'");
      }
    }
  }
  spec.features.validate();
  spec.train.validate();
  return spec;
}

std::string ModelSpec::to_string() const {
  return name + ":lr=" + format_shortest(train.learning_rate) +
         ",l2=" + format_shortest(train.l2) +
         ",batch=" + std::to_string(train.batch_size) +
         ",ngram=" + std::to_string(features.ngram_min) + "-" +
         std::to_string(features.ngram_max) +
         ",max-features=" + std::to_string(features.max_features);
}

const EpochRecord& CvResult::record(int epoch) const {
  for (const auto& r : per_epoch) {
    if (r.epoch == epoch) return r;
  }
  invalid("epoch " + std::to_string(epoch) + " not in the grid");
}

const MetricsReport& CvResult::reported(const EpochRecord& rec) const {
  return aggregation == Aggregation::kPooled ? rec.pooled : rec.fold_averaged;
}

int select_best_epoch(std::span<const int> epochs,
                      std::span<const double> mean_f1) {
  if (epochs.empty() || epochs.size() != mean_f1.size()) {
    invalid("epoch and score lists must be nonempty and of equal length");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    const bool better = mean_f1[i] > mean_f1[best] ||
                        (mean_f1[i] == mean_f1[best] && epochs[i] < epochs[best]);
    if (better) best = i;
  }
  return epochs[best];
}

Seed training_seed(Seed master, std::string_view model, std::uint32_t fold) {
  return derive_seed(master, "train/" + std::string(model) + "/" +
                                 std::to_string(fold));
}

Seed tie_seed(Seed master) { return derive_seed(master, "majority-vote/ties"); }

std::vector<CvOutcome> run_cv(const Corpus& corpus, const FoldPlan& plan,
                              std::span<const ModelSpec> models,
                              const EpochGrid& grid, Seed master,
                              Aggregation aggregation, unsigned jobs) {
  grid.validate();
  if (models.empty()) invalid("no model configurations given");
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!is_valid_model_name(m.name)) invalid("invalid model name '" + m.name + "'");
    if (!names.insert(m.name).second) {
      invalid("duplicate model name '" + m.name + "'");
    }
  }
  if (plan.ids().size() != corpus.size()) {
    throw Error(ErrorCode::kIdSetMismatch,
                "fold plan covers " + std::to_string(plan.ids().size()) +
                    " ids, corpus has " + std::to_string(corpus.size()));
  }
  std::vector<std::uint32_t> fold_of(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& id = corpus.examples()[i].id;
    const auto f = plan.fold_of(id);
    if (!f) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "corpus id '" + id + "' missing from the fold plan", {id});
    }
    fold_of[i] = *f;
  }
  const std::uint32_t k = plan.k();

  // results[model * k + fold][epoch index]
  std::vector<std::vector<PredictionSet>> results(models.size() * k);
  run_jobs(results.size(), jobs, [&](std::size_t job) {
    const auto& spec = models[job / k];
    const auto fold = static_cast<std::uint32_t>(job % k);
    std::size_t row = 0;
    const Corpus train = corpus.filter(
        corpus.name() + ".train", [&](const LabeledExample&) {
          return fold_of[row++] != fold;
        });
    row = 0;
    const Corpus held = corpus.filter(
        corpus.name() + ".heldout", [&](const LabeledExample&) {
          return fold_of[row++] == fold;
        });
    baseline::TrainConfig config = spec.train;
    config.seed = training_seed(master, spec.name, fold);
    const auto snapshots =
        baseline::train_snapshots(train, spec.features, config, grid.epochs);
    auto& slot = results[job];
    for (const auto& model : snapshots) {
      slot.push_back(model.predict(held, spec.name));
    }
  });

  std::vector<CvOutcome> outcomes;
  for (std::size_t m = 0; m < models.size(); ++m) {
    CvOutcome outcome;
    outcome.result.model_name = models[m].name;
    outcome.result.aggregation = aggregation;
    std::vector<double> mean_f1;
    for (std::size_t e = 0; e < grid.epochs.size(); ++e) {
      EpochRecord rec;
      rec.epoch = grid.epochs[e];
      PredictionSet oof;
      oof.model_name = models[m].name;
      for (std::uint32_t f = 0; f < k; ++f) {
        const auto& fold_preds = results[m * k + f][e];
        ConfusionMatrix cm;
        for (const auto& [id, sv] : fold_preds.scores) {
          cm.add(corpus.find(id)->label, hard_label(sv));
          oof.scores.emplace(id, sv);
        }
        rec.fold_confusions.push_back(cm);
        rec.fold_metrics.push_back(compute_metrics(cm));
      }
      rec.pooled = pooled_metrics(rec.fold_confusions);
      rec.fold_averaged = fold_averaged_metrics(rec.fold_metrics);
      rec.mean_fold_f1 = rec.fold_averaged.f1;
      mean_f1.push_back(rec.mean_fold_f1);
      outcome.out_of_fold.emplace(rec.epoch, std::move(oof));
      outcome.result.per_epoch.push_back(std::move(rec));
    }
    outcome.result.best_epoch = select_best_epoch(grid.epochs, mean_f1);
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

LabelEvaluation evaluate_labels(const LabelMap& gold, const LabelMap& predicted,
                                Aggregation aggregation, const FoldPlan* plan) {
  if (predicted.empty()) {
    throw Error(ErrorCode::kEmptyEvaluation, "no predictions to evaluate");
  }
  LabelMap restricted;
  std::vector<std::string> missing;
  std::size_t n_missing = 0;
  for (const auto& [id, label] : predicted) {
    const auto it = gold.find(id);
    if (it == gold.end()) {
      if (missing.size() < 10) missing.push_back(id);
      ++n_missing;
      continue;
    }
    restricted.emplace_hint(restricted.end(), id, it->second);
  }
  if (n_missing > 0) {
    throw Error(ErrorCode::kIdSetMismatch,
                std::to_string(n_missing) + " predicted ids are not in gold",
                std::move(missing));
  }

  LabelEvaluation out;
  out.pooled_counts = confusion(restricted, predicted);
  if (aggregation == Aggregation::kPooled) {
    out.metrics = compute_metrics(out.pooled_counts);
    return out;
  }
  if (plan == nullptr) {
    invalid("fold-averaged aggregation needs a fold plan");
  }
  std::vector<ConfusionMatrix> per_fold(plan->k());
  for (const auto& [id, label] : predicted) {
    const auto f = plan->fold_of(id);
    if (!f) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "id '" + id + "' is not in the fold plan", {id});
    }
    per_fold[*f].add(restricted.at(id), label);
  }
  std::vector<MetricsReport> reports;
  for (const auto& cm : per_fold) {
    if (cm.total() > 0) reports.push_back(compute_metrics(cm));
  }
  out.metrics = fold_averaged_metrics(reports);
  return out;
}

EnsembleEvaluation evaluate_ensembles(const EnsembleInput& input,
                                      const Corpus& gold,
                                      const EnsembleOptions& options,
                                      const FoldPlan* plan) {
  const LabelMap gold_labels = gold.labels();
  EnsembleEvaluation eval{ResultsTable(options.aggregation), {}, {}};
  auto add_row = [&](RowGroup group, std::string name, const LabelMap& labels) {
    const auto scored =
        evaluate_labels(gold_labels, labels, options.aggregation, plan);
    eval.table.add(ResultsRow{group, std::move(name), scored.metrics,
                              scored.pooled_counts});
  };
  if (options.majority) {
    eval.majority = majority_vote(input, options.tie);
    add_row(RowGroup::kEnsemble, std::string(kMajorityVoteName),
            eval.majority->labels);
  }
  if (options.highest_sum) {
    eval.highest_sum = highest_sum(input, options.scale);
    add_row(RowGroup::kEnsemble, std::string(kHighestSumName),
            *eval.highest_sum);
  }
  for (const auto& member : input.members()) {
    add_row(RowGroup::kModel, member.model_name, hard_labels(member));
  }
  return eval;
}

std::vector<BestEpochRow> best_epoch_rows(std::span<const CvOutcome> outcomes) {
  std::vector<BestEpochRow> rows;
  for (const auto& o : outcomes) {
    BestEpochRow row;
    row.model = o.result.model_name;
    row.best_epoch = o.result.best_epoch;
    for (const auto& rec : o.result.per_epoch) {
      row.mean_f1.emplace_back(rec.epoch, rec.mean_fold_f1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace foldvote
