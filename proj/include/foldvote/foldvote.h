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

/* C interface to libfoldvote.
 *
 * Conventions:
 *  - Every fallible call returns fv_status. On failure, fv_last_error() and
 *    fv_last_error_detail() describe the error for the calling thread until
 *    its next failing call.
 *  - Objects are opaque handles released with the matching *_free function.
 *    Passing NULL to a *_free function is a no-op.
 *  - Strings returned through char** out-parameters are heap copies owned by
 *    the caller and released with fv_string_free.
 *  - Text is UTF-8. Paths are native narrow strings.
 */
#ifndef FOLDVOTE_FOLDVOTE_H_
#define FOLDVOTE_FOLDVOTE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FOLDVOTE_BUILDING_LIBRARY)
#define FV_API __attribute__((visibility("default")))
#else
#define FV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fv_status {
  FV_OK = 0,
  FV_ERR_INVALID_ARGUMENT = 1,
  FV_ERR_IO = 2,
  FV_ERR_MALFORMED_ROW = 3,
  FV_ERR_DUPLICATE_ID = 4,
  FV_ERR_UNKNOWN_LABEL_TOKEN = 5,
  FV_ERR_INVALID_FRACTION = 6,
  FV_ERR_INVALID_K = 7,
  FV_ERR_ID_SET_MISMATCH = 8,
  FV_ERR_EMPTY_EVALUATION = 9,
  FV_ERR_DEGENERATE_SCORES = 10,
  FV_ERR_SINGLE_CLASS_CORPUS = 11,
  FV_ERR_DIGEST_MISMATCH = 12,
  FV_ERR_INTERNAL = 13
} fv_status;

typedef struct fv_corpus fv_corpus;
typedef struct fv_fold_plan fv_fold_plan;
typedef struct fv_model fv_model;
typedef struct fv_predictions fv_predictions;
typedef struct fv_table fv_table;
typedef struct fv_run fv_run;

/* Library version, e.g. "0.1.0". Static storage. */
FV_API const char* fv_version(void);
/* Symbolic name of a status, e.g. "IdSetMismatch". Static storage. */
FV_API const char* fv_status_name(fv_status status);
/* Message of the calling thread's last error, "" if none. Valid until the
 * thread's next failing call. */
FV_API const char* fv_last_error(void);
/* Number of detail strings (such as differing ids) attached to it. */
FV_API size_t fv_last_error_detail_count(void);
FV_API const char* fv_last_error_detail(size_t index);
FV_API void fv_string_free(char* s);

/* ---- corpus ---------------------------------------------------------- */

/* format: "tsv" or "jsonl". */
FV_API fv_status fv_corpus_load(const char* path, const char* format,
                                fv_corpus** out);
FV_API fv_status fv_corpus_synthesize(size_t n, size_t n_positive,
                                      uint64_t seed, fv_corpus** out);
FV_API fv_status fv_corpus_save(const fv_corpus* corpus, const char* path,
                                const char* format);
FV_API void fv_corpus_free(fv_corpus* corpus);
FV_API size_t fv_corpus_size(const fv_corpus* corpus);

typedef struct fv_corpus_stats {
  size_t n;
  size_t n_positive;
  double prior;
  size_t n_empty_text;
} fv_corpus_stats;

FV_API fv_status fv_corpus_stats_get(const fv_corpus* corpus,
                                     fv_corpus_stats* out);
/* Stratified when both classes have at least two examples; *stratified
 * reports which path was taken. */
FV_API fv_status fv_corpus_split(const fv_corpus* corpus, double test_fraction,
                                 uint64_t seed, fv_corpus** train,
                                 fv_corpus** test, int* stratified);

/* ---- folds ----------------------------------------------------------- */

FV_API fv_status fv_folds_make(const fv_corpus* corpus, uint32_t k,
                               uint64_t seed, int stratified,
                               fv_fold_plan** out);
FV_API fv_status fv_folds_save(const fv_fold_plan* plan, const char* path);
FV_API fv_status fv_folds_load(const char* path, fv_fold_plan** out);
FV_API void fv_folds_free(fv_fold_plan* plan);
FV_API uint32_t fv_folds_k(const fv_fold_plan* plan);
/* Fold of `id`, or FV_ERR_INVALID_ARGUMENT when the id is not in the plan. */
FV_API fv_status fv_folds_fold_of(const fv_fold_plan* plan, const char* id,
                                  uint32_t* fold);

/* ---- baseline model -------------------------------------------------- */

typedef struct fv_model_config {
  double learning_rate;
  int epochs;
  double l2;
  int batch_size;
  int ngram_min;
  int ngram_max;
  size_t max_features;
  uint64_t seed;
} fv_model_config;

FV_API void fv_model_config_default(fv_model_config* config);
FV_API fv_status fv_model_train(const fv_corpus* corpus,
                                const fv_model_config* config, fv_model** out);
FV_API fv_status fv_model_save(const fv_model* model, const char* path);
FV_API fv_status fv_model_load(const char* path, fv_model** out);
FV_API void fv_model_free(fv_model* model);
/* Scores one text: scores[0] is not_hateful, scores[1] hateful. */
FV_API fv_status fv_model_predict_text(const fv_model* model, const char* text,
                                       double scores[2]);
FV_API fv_status fv_model_predict_corpus(const fv_model* model,
                                         const fv_corpus* corpus,
                                         const char* model_name,
                                         fv_predictions** out);

/* ---- prediction sets ------------------------------------------------- */

/* model_name may be NULL to derive it from the file name. */
FV_API fv_status fv_predictions_load(const char* path, const char* model_name,
                                     fv_predictions** out);
FV_API fv_status fv_predictions_save(const fv_predictions* preds,
                                     const char* path);
FV_API void fv_predictions_free(fv_predictions* preds);
FV_API size_t fv_predictions_size(const fv_predictions* preds);

/* ---- runs ------------------------------------------------------------ */

typedef struct fv_cv_options {
  const char* input;       /* corpus path */
  const char* format;      /* "tsv" or "jsonl" */
  uint32_t k;
  const char* epochs;      /* grid, e.g. "1-5" */
  const char* const* models; /* model specs, may be NULL for the default */
  size_t n_models;
  uint64_t seed;
  int stratified;
  const char* aggregation; /* "pooled" or "fold-averaged" */
  const char* tie;         /* "random" or "positive" */
  const char* scale;       /* "normalized" or "raw" */
  const char* out_root;
  const char* run_id;      /* NULL or "" for "seed-<seed>" */
  unsigned jobs;
  int overwrite;
  const char* adapter_manifest; /* may be NULL */
} fv_cv_options;

FV_API void fv_cv_options_default(fv_cv_options* options);
FV_API fv_status fv_run_cv(const fv_cv_options* options, fv_run** out);
/* Repeats the run recorded in `manifest` into out_root (NULL keeps "runs"). */
FV_API fv_status fv_run_cv_from_manifest(const char* manifest,
                                         const char* out_root, unsigned jobs,
                                         int overwrite, fv_run** out);

typedef struct fv_ensemble_options {
  const char* const* predictions; /* "path" or "name=path" */
  size_t n_predictions;
  const char* gold;
  const char* gold_format;
  const char* method;      /* "majority", "highest-sum" or "both" */
  const char* tie;
  uint64_t seed;
  const char* aggregation;
  const char* scale;
  const char* folds;       /* may be NULL unless fold-averaged */
  const char* out_dir;     /* may be NULL */
  const char* adapter_manifest; /* may be NULL */
} fv_ensemble_options;

FV_API void fv_ensemble_options_default(fv_ensemble_options* options);
FV_API fv_status fv_run_ensemble(const fv_ensemble_options* options,
                                 fv_run** out);

FV_API void fv_run_free(fv_run* run);
/* Run directory for cv runs, output directory (or "") for ensemble runs. */
FV_API const char* fv_run_dir(const fv_run* run);
FV_API size_t fv_run_model_count(const fv_run* run);
FV_API const char* fv_run_model_name(const fv_run* run, size_t index);
FV_API int fv_run_best_epoch(const fv_run* run, size_t index);
/* Majority-vote ties, or -1 when majority vote was not run. */
FV_API int64_t fv_run_tie_count(const fv_run* run);
/* format: "text", "tsv" or "json". */
FV_API fv_status fv_run_render_results(const fv_run* run, const char* format,
                                       char** out);
FV_API fv_status fv_run_render_best_epochs(const fv_run* run,
                                           const char* format, char** out);
FV_API fv_status fv_run_manifest(const fv_run* run, char** out);

/* ---- results tables -------------------------------------------------- */

FV_API fv_status fv_table_load(const char* path, const char* aggregation,
                               fv_table** out);
FV_API void fv_table_free(fv_table* table);
FV_API size_t fv_table_row_count(const fv_table* table);
FV_API fv_status fv_table_render(const fv_table* table, const char* format,
                                 char** out);
/* F1 consistency audit rendered in `format`; *n_inconsistent counts rows
 * whose F1 differs from 2PR/(P+R) by more than `tolerance`. */
FV_API fv_status fv_table_audit(const fv_table* table, double tolerance,
                                const char* format, char** out,
                                size_t* n_inconsistent);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* FOLDVOTE_FOLDVOTE_H_ */
