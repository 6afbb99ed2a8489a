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

#include "foldvote/foldvote.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "foldvote/baseline_model.hpp"
#include "foldvote/corpus.hpp"
#include "foldvote/ensemble.hpp"
#include "foldvote/error.hpp"
#include "foldvote/manifest.hpp"
#include "foldvote/report.hpp"
#include "foldvote/runs.hpp"

struct fv_corpus {
  foldvote::Corpus value;
};
struct fv_fold_plan {
  foldvote::FoldPlan value;
};
struct fv_model {
  foldvote::baseline::BaselineModel value;
};
struct fv_predictions {
  foldvote::PredictionSet value;
};
struct fv_table {
  foldvote::ResultsTable value;
};
struct fv_run {
  std::string dir;
  std::vector<std::string> models;
  std::vector<int> best_epochs;
  std::vector<foldvote::BestEpochRow> best_rows;
  foldvote::ResultsTable table;
  std::int64_t tie_count = -1;
  std::string manifest;
};

namespace {

using foldvote::Error;
using foldvote::ErrorCode;

struct LastError {
  std::string message;
  std::vector<std::string> details;
};

thread_local LastError last_error;

fv_status record(fv_status status, std::string message,
                 std::vector<std::string> details = {}) {
  last_error.message = std::move(message);
  last_error.details = std::move(details);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
fv_status guarded(Body&& body) noexcept {
  try {
    body();
    return FV_OK;
  } catch (const Error& e) {
    return record(static_cast<fv_status>(e.code()), e.message(), e.details());
  } catch (const std::bad_alloc&) {
    return record(FV_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return record(FV_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return record(FV_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(FV_ERR_INTERNAL, "unknown failure");
  }
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

template <typename T>
const T& need(const T* handle, const char* what) {
  if (handle == nullptr) invalid(std::string(what) + " must not be NULL");
  return *handle;
}

const char* need_str(const char* s, const char* what) {
  if (s == nullptr) invalid(std::string(what) + " must not be NULL");
  return s;
}

template <typename T>
T* need_out(T* out, const char* what) {
  if (out == nullptr) invalid(std::string(what) + " must not be NULL");
  return out;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

foldvote::CorpusFormat corpus_format(const char* name) {
  if (name == nullptr) return foldvote::CorpusFormat::kTsv;
  if (auto f = foldvote::parse_corpus_format(name)) return *f;
  invalid(std::string("unknown corpus format '") + name + "'");
}

foldvote::TableFormat table_format(const char* name) {
  if (name == nullptr) return foldvote::TableFormat::kText;
  if (auto f = foldvote::parse_table_format(name)) return *f;
  invalid(std::string("unknown table format '") + name + "'");
}

foldvote::Aggregation aggregation(const char* name) {
  if (name == nullptr) return foldvote::Aggregation::kPooled;
  if (auto a = foldvote::parse_aggregation(name)) return *a;
  invalid(std::string("unknown aggregation '") + name + "'");
}

foldvote::TieKind tie_kind(const char* name) {
  if (name == nullptr) return foldvote::TieKind::kSeededRandom;
  if (auto t = foldvote::parse_tie_kind(name)) return *t;
  invalid(std::string("unknown tie rule '") + name + "'");
}

foldvote::ScoreScale score_scale(const char* name) {
  if (name == nullptr) return foldvote::ScoreScale::kNormalized;
  if (auto s = foldvote::parse_score_scale(name)) return *s;
  invalid(std::string("unknown score scale '") + name + "'");
}

fv_run* make_cv_run(const foldvote::CvRunSummary& summary) {
  auto run = std::make_unique<fv_run>();
  run->dir = summary.run_dir.generic_string();
  for (const auto& o : summary.outcomes) {
    run->models.push_back(o.result.model_name);
    run->best_epochs.push_back(o.result.best_epoch);
  }
  run->best_rows = foldvote::best_epoch_rows(summary.outcomes);
  run->table = summary.ensembles.table;
  if (summary.ensembles.majority) {
    run->tie_count =
        static_cast<std::int64_t>(summary.ensembles.majority->tie_count);
  }
  run->manifest = foldvote::read_text_file(summary.run_dir / "manifest.json");
  return run.release();
}

}  // namespace

extern "C" {

const char* fv_version(void) { return FOLDVOTE_VERSION; }

const char* fv_status_name(fv_status status) {
  if (status == FV_OK) return "Ok";
  if (status < FV_ERR_INVALID_ARGUMENT || status > FV_ERR_INTERNAL) {
    return "Unknown";
  }
  return foldvote::to_string(static_cast<ErrorCode>(status)).data();
}

const char* fv_last_error(void) { return last_error.message.c_str(); }

size_t fv_last_error_detail_count(void) { return last_error.details.size(); }

const char* fv_last_error_detail(size_t index) {
  if (index >= last_error.details.size()) return "";
  return last_error.details[index].c_str();
}

void fv_string_free(char* s) { std::free(s); }

fv_status fv_corpus_load(const char* path, const char* format,
                         fv_corpus** out) {
  return guarded([&] {
    need_out(out, "out");
    auto corpus = foldvote::load_corpus(need_str(path, "path"),
                                        corpus_format(format));
    *out = new fv_corpus{std::move(corpus)};
  });
}

fv_status fv_corpus_synthesize(size_t n, size_t n_positive, uint64_t seed,
                               fv_corpus** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = new fv_corpus{foldvote::synthesize_corpus(n, n_positive, seed)};
  });
}

fv_status fv_corpus_save(const fv_corpus* corpus, const char* path,
                         const char* format) {
  return guarded([&] {
    foldvote::save_corpus(need(corpus, "corpus").value, need_str(path, "path"),
                          corpus_format(format));
  });
}

void fv_corpus_free(fv_corpus* corpus) { delete corpus; }

size_t fv_corpus_size(const fv_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->value.size();
}

fv_status fv_corpus_stats_get(const fv_corpus* corpus, fv_corpus_stats* out) {
  return guarded([&] {
    const auto s = foldvote::corpus_stats(need(corpus, "corpus").value);
    *need_out(out, "out") = fv_corpus_stats{s.n, s.n_positive, s.prior,
                                            s.n_empty_text};
  });
}

fv_status fv_corpus_split(const fv_corpus* corpus, double test_fraction,
                          uint64_t seed, fv_corpus** train, fv_corpus** test,
                          int* stratified) {
  return guarded([&] {
    need_out(train, "train");
    need_out(test, "test");
    auto split = foldvote::train_test_split(need(corpus, "corpus").value,
                                            test_fraction, seed);
    auto train_h = std::make_unique<fv_corpus>(fv_corpus{std::move(split.train)});
    *test = new fv_corpus{std::move(split.test)};
    *train = train_h.release();
    if (stratified != nullptr) *stratified = split.stratified ? 1 : 0;
  });
}

fv_status fv_folds_make(const fv_corpus* corpus, uint32_t k, uint64_t seed,
                        int stratified, fv_fold_plan** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = new fv_fold_plan{foldvote::make_folds(need(corpus, "corpus").value,
                                                 k, seed, stratified != 0)};
  });
}

fv_status fv_folds_save(const fv_fold_plan* plan, const char* path) {
  return guarded([&] {
    foldvote::save_fold_plan(need(plan, "plan").value, need_str(path, "path"));
  });
}

fv_status fv_folds_load(const char* path, fv_fold_plan** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = new fv_fold_plan{foldvote::load_fold_plan(need_str(path, "path"))};
  });
}

void fv_folds_free(fv_fold_plan* plan) { delete plan; }

uint32_t fv_folds_k(const fv_fold_plan* plan) {
  return plan == nullptr ? 0 : plan->value.k();
}

fv_status fv_folds_fold_of(const fv_fold_plan* plan, const char* id,
                           uint32_t* fold) {
  return guarded([&] {
    const auto f = need(plan, "plan").value.fold_of(need_str(id, "id"));
    if (!f) invalid(std::string("id '") + id + "' is not in the fold plan");
    *need_out(fold, "fold") = *f;
  });
}

void fv_model_config_default(fv_model_config* config) {
  if (config == nullptr) return;
  const foldvote::baseline::TrainConfig train;
  const foldvote::baseline::FeatureOptions features;
  *config = fv_model_config{train.learning_rate, train.epochs,
                            train.l2,            train.batch_size,
                            features.ngram_min,  features.ngram_max,
                            features.max_features, train.seed};
}

fv_status fv_model_train(const fv_corpus* corpus,
                         const fv_model_config* config, fv_model** out) {
  return guarded([&] {
    need_out(out, "out");
    const auto& c = need(config, "config");
    foldvote::baseline::FeatureOptions features;
    features.ngram_min = c.ngram_min;
    features.ngram_max = c.ngram_max;
    features.max_features = c.max_features;
    foldvote::baseline::TrainConfig train;
    train.learning_rate = c.learning_rate;
    train.epochs = c.epochs;
    train.l2 = c.l2;
    train.batch_size = c.batch_size;
    train.seed = c.seed;
    *out = new fv_model{foldvote::baseline::train(need(corpus, "corpus").value,
                                                  features, train)};
  });
}

fv_status fv_model_save(const fv_model* model, const char* path) {
  return guarded(
      [&] { need(model, "model").value.save(need_str(path, "path")); });
}

fv_status fv_model_load(const char* path, fv_model** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = new fv_model{
        foldvote::baseline::BaselineModel::load(need_str(path, "path"))};
  });
}

void fv_model_free(fv_model* model) { delete model; }

fv_status fv_model_predict_text(const fv_model* model, const char* text,
                                double scores[2]) {
  return guarded([&] {
    const auto sv =
        need(model, "model").value.predict_scores(need_str(text, "text"));
    need_out(scores, "scores");
    scores[0] = sv.not_hateful;
    scores[1] = sv.hateful;
  });
}

fv_status fv_model_predict_corpus(const fv_model* model,
                                  const fv_corpus* corpus,
                                  const char* model_name,
                                  fv_predictions** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = new fv_predictions{need(model, "model").value.predict(
        need(corpus, "corpus").value,
        model_name == nullptr ? "baseline" : model_name)};
  });
}

fv_status fv_predictions_load(const char* path, const char* model_name,
                              fv_predictions** out) {
  return guarded([&] {
    need_out(out, "out");
    std::optional<std::string> name;
    if (model_name != nullptr) name = model_name;
    *out = new fv_predictions{
        foldvote::load_prediction_set(need_str(path, "path"), name)};
  });
}

fv_status fv_predictions_save(const fv_predictions* preds, const char* path) {
  return guarded([&] {
    foldvote::save_prediction_set(need(preds, "predictions").value,
                                  need_str(path, "path"));
  });
}

void fv_predictions_free(fv_predictions* preds) { delete preds; }

size_t fv_predictions_size(const fv_predictions* preds) {
  return preds == nullptr ? 0 : preds->value.scores.size();
}

void fv_cv_options_default(fv_cv_options* options) {
  if (options == nullptr) return;
  *options = fv_cv_options{};
  options->format = "tsv";
  options->k = 5;
  options->epochs = "1-5";
  options->stratified = 1;
  options->aggregation = "pooled";
  options->tie = "random";
  options->scale = "normalized";
  options->out_root = "runs";
  options->jobs = 1;
}

fv_status fv_run_cv(const fv_cv_options* options, fv_run** out) {
  return guarded([&] {
    need_out(out, "out");
    const auto& o = need(options, "options");
    foldvote::CvRunOptions run;
    run.input = need_str(o.input, "input");
    run.format = corpus_format(o.format);
    run.k = o.k;
    if (o.epochs != nullptr) run.grid = foldvote::EpochGrid::parse(o.epochs);
    if (o.models != nullptr && o.n_models > 0) {
      run.models.clear();
      for (size_t i = 0; i < o.n_models; ++i) {
        run.models.push_back(
            foldvote::ModelSpec::parse(need_str(o.models[i], "model spec")));
      }
    }
    run.seed = o.seed;
    run.stratified = o.stratified != 0;
    run.aggregation = aggregation(o.aggregation);
    run.tie = tie_kind(o.tie);
    run.scale = score_scale(o.scale);
    if (o.out_root != nullptr) run.out_root = o.out_root;
    if (o.run_id != nullptr) run.run_id = o.run_id;
    run.jobs = o.jobs == 0 ? 1 : o.jobs;
    run.overwrite = o.overwrite != 0;
    if (o.adapter_manifest != nullptr) run.adapter_manifest = o.adapter_manifest;
    *out = make_cv_run(foldvote::run_cv_experiment(run));
  });
}

fv_status fv_run_cv_from_manifest(const char* manifest, const char* out_root,
                                  unsigned jobs, int overwrite, fv_run** out) {
  return guarded([&] {
    need_out(out, "out");
    auto run = foldvote::cv_options_from_manifest(need_str(manifest, "manifest"));
    if (out_root != nullptr) run.out_root = out_root;
    run.jobs = jobs == 0 ? 1 : jobs;
    run.overwrite = overwrite != 0;
    *out = make_cv_run(foldvote::run_cv_experiment(run));
  });
}

void fv_ensemble_options_default(fv_ensemble_options* options) {
  if (options == nullptr) return;
  *options = fv_ensemble_options{};
  options->gold_format = "tsv";
  options->method = "both";
  options->tie = "random";
  options->aggregation = "pooled";
  options->scale = "normalized";
}

fv_status fv_run_ensemble(const fv_ensemble_options* options, fv_run** out) {
  return guarded([&] {
    need_out(out, "out");
    const auto& o = need(options, "options");
    foldvote::EnsembleRunOptions run;
    for (size_t i = 0; i < o.n_predictions; ++i) {
      run.predictions.emplace_back(
          need_str(o.predictions[i], "prediction path"));
    }
    run.gold = need_str(o.gold, "gold");
    run.gold_format = corpus_format(o.gold_format);
    if (o.method != nullptr) {
      const auto method = foldvote::parse_ensemble_method(o.method);
      if (!method) invalid(std::string("unknown method '") + o.method + "'");
      run.method = *method;
    }
    run.tie = tie_kind(o.tie);
    run.seed = o.seed;
    run.aggregation = aggregation(o.aggregation);
    run.scale = score_scale(o.scale);
    if (o.folds != nullptr) run.folds = o.folds;
    if (o.out_dir != nullptr) run.out_dir = o.out_dir;
    if (o.adapter_manifest != nullptr) run.adapter_manifest = o.adapter_manifest;

    auto summary = foldvote::run_ensemble(run);
    auto handle = std::make_unique<fv_run>();
    handle->dir = run.out_dir ? run.out_dir->generic_string() : "";
    for (const auto& row : summary.evaluation.table.rows()) {
      if (row.group == foldvote::RowGroup::kModel) {
        handle->models.push_back(row.name);
        handle->best_epochs.push_back(0);
      }
    }
    handle->table = summary.evaluation.table;
    if (summary.evaluation.majority) {
      handle->tie_count =
          static_cast<std::int64_t>(summary.evaluation.majority->tie_count);
    }
    handle->manifest = std::move(summary.manifest_json);
    *out = handle.release();
  });
}

void fv_run_free(fv_run* run) { delete run; }

const char* fv_run_dir(const fv_run* run) {
  return run == nullptr ? "" : run->dir.c_str();
}

size_t fv_run_model_count(const fv_run* run) {
  return run == nullptr ? 0 : run->models.size();
}

const char* fv_run_model_name(const fv_run* run, size_t index) {
  if (run == nullptr || index >= run->models.size()) return "";
  return run->models[index].c_str();
}

int fv_run_best_epoch(const fv_run* run, size_t index) {
  if (run == nullptr || index >= run->best_epochs.size()) return 0;
  return run->best_epochs[index];
}

int64_t fv_run_tie_count(const fv_run* run) {
  return run == nullptr ? -1 : run->tie_count;
}

fv_status fv_run_render_results(const fv_run* run, const char* format,
                                char** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = copy_string(
        foldvote::render_table(need(run, "run").table, table_format(format)));
  });
}

fv_status fv_run_render_best_epochs(const fv_run* run, const char* format,
                                    char** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = copy_string(foldvote::render_best_epochs(need(run, "run").best_rows,
                                                    table_format(format)));
  });
}

fv_status fv_run_manifest(const fv_run* run, char** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = copy_string(need(run, "run").manifest);
  });
}

fv_status fv_table_load(const char* path, const char* aggregation_name,
                        fv_table** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = new fv_table{foldvote::load_results_tsv(
        need_str(path, "path"), aggregation(aggregation_name))};
  });
}

void fv_table_free(fv_table* table) { delete table; }

size_t fv_table_row_count(const fv_table* table) {
  return table == nullptr ? 0 : table->value.rows().size();
}

fv_status fv_table_render(const fv_table* table, const char* format,
                          char** out) {
  return guarded([&] {
    need_out(out, "out");
    *out = copy_string(
        foldvote::render_table(need(table, "table").value, table_format(format)));
  });
}

fv_status fv_table_audit(const fv_table* table, double tolerance,
                         const char* format, char** out,
                         size_t* n_inconsistent) {
  return guarded([&] {
    need_out(out, "out");
    const auto rows = foldvote::audit_f1(need(table, "table").value, tolerance);
    if (n_inconsistent != nullptr) {
      *n_inconsistent = static_cast<size_t>(
          std::count_if(rows.begin(), rows.end(),
                        [](const auto& r) { return !r.consistent; }));
    }
    *out = copy_string(foldvote::render_f1_audit(rows, table_format(format)));
  });
}

}  // extern "C"
