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

// foldvote command-line tool.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error,
// 3 internal error. stdout carries the primary document of each subcommand;
// diagnostics go to stderr.

#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "foldvote/foldvote.h"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Raised by command bodies after a library call fails.
struct Failure {
  fv_status status;
};

void check(fv_status status) {
  if (status != FV_OK) throw Failure{status};
}

int report_failure(fv_status status) {
  std::cerr << "error: " << fv_status_name(status) << ": " << fv_last_error()
            << '\n';
  const size_t n = fv_last_error_detail_count();
  for (size_t i = 0; i < n; ++i) {
    std::cerr << "  " << fv_last_error_detail(i) << '\n';
  }
  return status == FV_ERR_INTERNAL ? kExitInternal : kExitData;
}

// Owns a string returned by the library.
class LibString {
 public:
  LibString() = default;
  LibString(const LibString&) = delete;
  LibString& operator=(const LibString&) = delete;
  ~LibString() { fv_string_free(ptr_); }
  char** out() { return &ptr_; }
  const char* c_str() const { return ptr_ == nullptr ? "" : ptr_; }

 private:
  char* ptr_ = nullptr;
};

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr_); }
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Corpus = Handle<fv_corpus, fv_corpus_free>;
using FoldPlan = Handle<fv_fold_plan, fv_folds_free>;
using Model = Handle<fv_model, fv_model_free>;
using Predictions = Handle<fv_predictions, fv_predictions_free>;
using Table = Handle<fv_table, fv_table_free>;
using Run = Handle<fv_run, fv_run_free>;

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void print_json(const nlohmann::ordered_json& doc) {
  std::cout << doc.dump(2) << '\n';
}

const std::vector<std::string> kCorpusFormats = {"tsv", "jsonl"};
const std::vector<std::string> kTableFormats = {"text", "tsv", "json"};
const std::vector<std::string> kModes = {"pooled", "fold-averaged"};
const std::vector<std::string> kTies = {"random", "positive"};
const std::vector<std::string> kScales = {"normalized", "raw"};
const std::vector<std::string> kMethods = {"majority", "highest-sum", "both"};

struct StatsArgs {
  std::string input;
  std::string format = "tsv";
};

int cmd_stats(const StatsArgs& a) {
  Corpus corpus;
  check(fv_corpus_load(a.input.c_str(), a.format.c_str(), corpus.out()));
  fv_corpus_stats s{};
  check(fv_corpus_stats_get(corpus.get(), &s));
  print_json({{"n", s.n},
              {"n_positive", s.n_positive},
              {"prior", s.prior},
              {"n_empty_text", s.n_empty_text}});
  return kExitOk;
}

struct SplitArgs {
  std::string input;
  std::string format = "tsv";
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string train_out;
  std::string test_out;
};

int cmd_split(const SplitArgs& a) {
  Corpus corpus, train, test;
  check(fv_corpus_load(a.input.c_str(), a.format.c_str(), corpus.out()));
  int stratified = 0;
  check(fv_corpus_split(corpus.get(), a.test_fraction, a.seed, train.out(),
                        test.out(), &stratified));
  check(fv_corpus_save(train.get(), a.train_out.c_str(), a.format.c_str()));
  check(fv_corpus_save(test.get(), a.test_out.c_str(), a.format.c_str()));
  if (!stratified) {
    std::cerr << "warning: a class has fewer than 2 examples; split is not "
                 "stratified\n";
  }
  print_json({{"train", fv_corpus_size(train.get())},
              {"test", fv_corpus_size(test.get())},
              {"stratified", stratified != 0}});
  return kExitOk;
}

struct FoldsArgs {
  std::string input;
  std::string format = "tsv";
  std::uint32_t k = 5;
  std::uint64_t seed = 0;
  bool no_stratify = false;
  std::string out;
};

int cmd_folds(const FoldsArgs& a) {
  Corpus corpus;
  FoldPlan plan;
  check(fv_corpus_load(a.input.c_str(), a.format.c_str(), corpus.out()));
  check(fv_folds_make(corpus.get(), a.k, a.seed, a.no_stratify ? 0 : 1,
                      plan.out()));
  check(fv_folds_save(plan.get(), a.out.c_str()));
  print_json({{"k", fv_folds_k(plan.get())},
              {"n", fv_corpus_size(corpus.get())},
              {"stratified", !a.no_stratify},
              {"path", a.out}});
  return kExitOk;
}

struct TrainArgs {
  std::string input;
  std::string format = "tsv";
  std::uint64_t seed = 0;
  fv_model_config config{};
  std::string out;
};

int cmd_train(TrainArgs a) {
  Corpus corpus;
  Model model;
  check(fv_corpus_load(a.input.c_str(), a.format.c_str(), corpus.out()));
  a.config.seed = a.seed;
  check(fv_model_train(corpus.get(), &a.config, model.out()));
  check(fv_model_save(model.get(), a.out.c_str()));
  print_json({{"model", a.out},
              {"examples", fv_corpus_size(corpus.get())},
              {"epochs", a.config.epochs},
              {"seed", a.seed}});
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string input;
  std::string format = "tsv";
  std::string name = "baseline";
  std::string out;
};

int cmd_predict(const PredictArgs& a) {
  Model model;
  Corpus corpus;
  Predictions preds;
  check(fv_model_load(a.model.c_str(), model.out()));
  check(fv_corpus_load(a.input.c_str(), a.format.c_str(), corpus.out()));
  check(fv_model_predict_corpus(model.get(), corpus.get(), a.name.c_str(),
                                preds.out()));
  check(fv_predictions_save(preds.get(), a.out.c_str()));
  print_json({{"predictions", a.out},
              {"model", a.name},
              {"examples", fv_predictions_size(preds.get())}});
  return kExitOk;
}

struct CvArgs {
  std::string input;
  std::string format = "tsv";
  std::uint32_t k = 5;
  std::string epochs = "1-5";
  std::uint64_t seed = 0;
  std::string out_dir = "runs";
  std::string run_id;
  std::vector<std::string> models;
  unsigned jobs = 1;
  std::string mode = "pooled";
  std::string tie = "random";
  std::string scale = "normalized";
  bool no_stratify = false;
  bool force = false;
  std::string adapter_manifest;
  std::string from_manifest;
  std::string table_format = "text";
};

void print_run(const fv_run* run, const std::string& format) {
  LibString best, results;
  check(fv_run_render_best_epochs(run, format.c_str(), best.out()));
  check(fv_run_render_results(run, format.c_str(), results.out()));
  std::cout << best.c_str() << '\n' << results.c_str();
  std::cerr << "run directory: " << fv_run_dir(run) << '\n';
}

int cmd_cv(const CvArgs& a) {
  Run run;
  if (!a.from_manifest.empty()) {
    check(fv_run_cv_from_manifest(a.from_manifest.c_str(), a.out_dir.c_str(),
                                  a.jobs, a.force ? 1 : 0, run.out()));
    print_run(run.get(), a.table_format);
    return kExitOk;
  }
  if (a.input.empty()) {
    std::cerr << "error: --input is required unless --from-manifest is given\n";
    return kExitUsage;
  }
  std::vector<const char*> models;
  for (const auto& m : a.models) models.push_back(m.c_str());
  fv_cv_options o;
  fv_cv_options_default(&o);
  o.input = a.input.c_str();
  o.format = a.format.c_str();
  o.k = a.k;
  o.epochs = a.epochs.c_str();
  o.models = models.empty() ? nullptr : models.data();
  o.n_models = models.size();
  o.seed = a.seed;
  o.stratified = a.no_stratify ? 0 : 1;
  o.aggregation = a.mode.c_str();
  o.tie = a.tie.c_str();
  o.scale = a.scale.c_str();
  o.out_root = a.out_dir.c_str();
  o.run_id = opt(a.run_id);
  o.jobs = a.jobs;
  o.overwrite = a.force ? 1 : 0;
  o.adapter_manifest = opt(a.adapter_manifest);
  check(fv_run_cv(&o, run.out()));
  print_run(run.get(), a.table_format);
  return kExitOk;
}

struct EnsembleArgs {
  std::vector<std::string> preds;
  std::string gold;
  std::string gold_format = "tsv";
  std::string method = "both";
  std::string tie = "random";
  std::uint64_t seed = 0;
  std::string mode = "pooled";
  std::string scale = "normalized";
  std::string folds;
  std::string out_dir;
  std::string adapter_manifest;
  std::string table_format = "text";
};

int cmd_ensemble(const EnsembleArgs& a) {
  std::vector<const char*> preds;
  for (const auto& p : a.preds) preds.push_back(p.c_str());
  fv_ensemble_options o;
  fv_ensemble_options_default(&o);
  o.predictions = preds.data();
  o.n_predictions = preds.size();
  o.gold = a.gold.c_str();
  o.gold_format = a.gold_format.c_str();
  o.method = a.method.c_str();
  o.tie = a.tie.c_str();
  o.seed = a.seed;
  o.aggregation = a.mode.c_str();
  o.scale = a.scale.c_str();
  o.folds = opt(a.folds);
  o.out_dir = opt(a.out_dir);
  o.adapter_manifest = opt(a.adapter_manifest);
  Run run;
  check(fv_run_ensemble(&o, run.out()));
  LibString table;
  check(fv_run_render_results(run.get(), a.table_format.c_str(), table.out()));
  std::cout << table.c_str();
  if (const auto ties = fv_run_tie_count(run.get()); ties >= 0) {
    std::cerr << "majority-vote ties: " << ties << '\n';
  }
  return kExitOk;
}

struct ReportArgs {
  std::string results;
  std::string mode = "pooled";
  std::string table_format = "text";
  bool audit = false;
  double tolerance = 0.01;
};

int cmd_report(const ReportArgs& a) {
  Table table;
  check(fv_table_load(a.results.c_str(), a.mode.c_str(), table.out()));
  LibString doc;
  if (a.audit) {
    size_t inconsistent = 0;
    check(fv_table_audit(table.get(), a.tolerance, a.table_format.c_str(),
                         doc.out(), &inconsistent));
    std::cerr << inconsistent << " of " << fv_table_row_count(table.get())
              << " rows fail the F1 identity\n";
  } else {
    check(fv_table_render(table.get(), a.table_format.c_str(), doc.out()));
  }
  std::cout << doc.c_str();
  return kExitOk;
}

struct SynthArgs {
  std::size_t n = 10828;
  std::size_t positives = 1191;
  std::uint64_t seed = 0;
  std::string format = "tsv";
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  Corpus corpus;
  check(fv_corpus_synthesize(a.n, a.positives, a.seed, corpus.out()));
  check(fv_corpus_save(corpus.get(), a.out.c_str(), a.format.c_str()));
  fv_corpus_stats s{};
  check(fv_corpus_stats_get(corpus.get(), &s));
  print_json({{"path", a.out},
              {"n", s.n},
              {"n_positive", s.n_positive},
              {"prior", s.prior}});
  return kExitOk;
}

CLI::Option* add_choice(CLI::App* app, const std::string& name,
                        std::string& value, const std::vector<std::string>& set,
                        const std::string& help) {
  return app->add_option(name, value, help)
      ->check(CLI::IsMember(set))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble evaluation harness for binary text classifiers"};
  app.set_version_flag("--version", std::string(fv_version()));
  app.require_subcommand(1);
  std::function<int()> body;

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Print corpus statistics as JSON");
  s->add_option("--input", stats.input, "Corpus file")->required();
  add_choice(s, "--format", stats.format, kCorpusFormats, "Corpus format");
  s->callback([&] { body = [&] { return cmd_stats(stats); }; });

  SplitArgs split;
  auto* sp = app.add_subcommand("split", "Stratified train/test split");
  sp->add_option("--input", split.input, "Corpus file")->required();
  add_choice(sp, "--format", split.format, kCorpusFormats, "Corpus format");
  sp->add_option("--test-fraction", split.test_fraction, "Held-out fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sp->add_option("--seed", split.seed, "Master seed")->capture_default_str();
  sp->add_option("--train-out", split.train_out, "Train corpus path")->required();
  sp->add_option("--test-out", split.test_out, "Test corpus path")->required();
  sp->callback([&] { body = [&] { return cmd_split(split); }; });

  FoldsArgs folds;
  auto* f = app.add_subcommand("folds", "Write a k-fold assignment");
  f->add_option("--input", folds.input, "Corpus file")->required();
  add_choice(f, "--format", folds.format, kCorpusFormats, "Corpus format");
  f->add_option("--k", folds.k, "Number of folds")
      ->check(CLI::Range(2u, std::numeric_limits<std::uint32_t>::max()))
      ->capture_default_str();
  f->add_option("--seed", folds.seed, "Master seed")->capture_default_str();
  f->add_flag("--no-stratify", folds.no_stratify, "Ignore labels");
  f->add_option("--out", folds.out, "Fold plan path")->required();
  f->callback([&] { body = [&] { return cmd_folds(folds); }; });

  TrainArgs train;
  fv_model_config_default(&train.config);
  auto* t = app.add_subcommand("train", "Train the baseline classifier");
  t->add_option("--input", train.input, "Training corpus")->required();
  add_choice(t, "--format", train.format, kCorpusFormats, "Corpus format");
  t->add_option("--seed", train.seed, "Master seed")->capture_default_str();
  t->add_option("--lr", train.config.learning_rate, "Learning rate")
      ->capture_default_str();
  t->add_option("--epochs", train.config.epochs, "Training epochs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  t->add_option("--l2", train.config.l2, "L2 penalty")->capture_default_str();
  t->add_option("--batch", train.config.batch_size, "Mini-batch size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  t->add_option("--ngram-min", train.config.ngram_min, "Shortest n-gram")
      ->capture_default_str();
  t->add_option("--ngram-max", train.config.ngram_max, "Longest n-gram")
      ->capture_default_str();
  t->add_option("--max-features", train.config.max_features, "Vocabulary cap")
      ->capture_default_str();
  t->add_option("--out", train.out, "Model JSON path")->required();
  t->callback([&] { body = [&] { return cmd_train(train); }; });

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "Score a corpus with a trained model");
  p->add_option("--model", predict.model, "Model JSON")->required();
  p->add_option("--input", predict.input, "Corpus file")->required();
  add_choice(p, "--format", predict.format, kCorpusFormats, "Corpus format");
  p->add_option("--name", predict.name, "Model name in the prediction set")
      ->capture_default_str();
  p->add_option("--out", predict.out, "Prediction TSV path")->required();
  p->callback([&] { body = [&] { return cmd_predict(predict); }; });

  CvArgs cv;
  auto* c = app.add_subcommand("cv", "Cross-validate baseline configurations");
  c->add_option("--input", cv.input, "Training corpus");
  add_choice(c, "--format", cv.format, kCorpusFormats, "Corpus format");
  c->add_option("--k", cv.k, "Number of folds")
      ->check(CLI::Range(2u, std::numeric_limits<std::uint32_t>::max()))
      ->capture_default_str();
  c->add_option("--epochs", cv.epochs, "Epoch grid, e.g. 1-5 or 1,2,4")
      ->capture_default_str();
  c->add_option("--seed", cv.seed, "Master seed")->capture_default_str();
  c->add_option("--out-dir", cv.out_dir, "Parent of the run directory")
      ->capture_default_str();
  c->add_option("--run-id", cv.run_id, "Run directory name (seed-<seed>)");
  c->add_option("--model", cv.models,
                "Model spec name[:lr=..,l2=..,batch=..,ngram=A-B,"
                "max-features=..]; repeatable");
  c->add_option("--jobs", cv.jobs, "Worker threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  add_choice(c, "--mode", cv.mode, kModes, "Metric aggregation");
  add_choice(c, "--tie", cv.tie, kTies, "Majority-vote tie rule");
  add_choice(c, "--scale", cv.scale, kScales, "Highest-sum score scale");
  add_choice(c, "--table-format", cv.table_format, kTableFormats,
             "stdout table format");
  c->add_flag("--no-stratify", cv.no_stratify, "Ignore labels when folding");
  c->add_flag("--force", cv.force, "Replace an existing run directory");
  c->add_option("--adapter-manifest", cv.adapter_manifest,
                "Transformer runner manifest to echo");
  c->add_option("--from-manifest", cv.from_manifest,
                "Repeat the run recorded in a manifest")
      ->excludes("--input");
  c->callback([&] { body = [&] { return cmd_cv(cv); }; });

  EnsembleArgs ens;
  auto* e = app.add_subcommand("ensemble", "Combine prediction files");
  e->add_option("--preds", ens.preds, "Prediction TSVs (path or name=path)")
      ->required();
  e->add_option("--gold", ens.gold, "Gold corpus")->required();
  add_choice(e, "--gold-format", ens.gold_format, kCorpusFormats,
             "Gold corpus format");
  add_choice(e, "--method", ens.method, kMethods, "Ensemble rule");
  add_choice(e, "--tie", ens.tie, kTies, "Majority-vote tie rule");
  e->add_option("--seed", ens.seed, "Master seed")->capture_default_str();
  add_choice(e, "--mode", ens.mode, kModes, "Metric aggregation");
  add_choice(e, "--scale", ens.scale, kScales, "Highest-sum score scale");
  e->add_option("--folds", ens.folds, "Fold plan (for fold-averaged mode)");
  e->add_option("--out-dir", ens.out_dir, "Directory for labels and tables");
  e->add_option("--adapter-manifest", ens.adapter_manifest,
                "Transformer runner manifest to echo");
  add_choice(e, "--table-format", ens.table_format, kTableFormats,
             "stdout table format");
  e->callback([&] { body = [&] { return cmd_ensemble(ens); }; });

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Render or audit a results table");
  r->add_option("--results", report.results, "results.tsv")->required();
  add_choice(r, "--mode", report.mode, kModes, "Aggregation of the table");
  add_choice(r, "--table-format", report.table_format, kTableFormats,
             "Output format");
  r->add_flag("--audit", report.audit, "Check F1 against 2PR/(P+R)");
  r->add_option("--tolerance", report.tolerance, "Audit tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  r->callback([&] { body = [&] { return cmd_report(report); }; });

  SynthArgs synth;
  auto* y = app.add_subcommand("synth", "Write a synthetic labeled corpus");
  y->add_option("--n", synth.n, "Examples")->capture_default_str();
  y->add_option("--positives", synth.positives, "Hateful examples")
      ->capture_default_str();
  y->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  add_choice(y, "--format", synth.format, kCorpusFormats, "Corpus format");
  y->add_option("--out", synth.out, "Corpus path")->required();
  y->callback([&] { body = [&] { return cmd_synth(synth); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    return body();
  } catch (const Failure& failure) {
    return report_failure(failure.status);
  } catch (const std::exception& ex) {
    std::cerr << "error: internal: " << ex.what() << '\n';
    return kExitInternal;
  }
}
