#ifndef QPOS_H
#define QPOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Largest circuit width accepted with `verify` set.
#define QPOS_MAX_VERIFY_QUBITS 8

// Decoder selector for [`qpos_tag`], passed as a `uint32_t`.
typedef enum QposBackend {
  QPOS_BACKEND_CLASSICAL = 0,
  QPOS_BACKEND_QUANTUM = 1,
  QPOS_BACKEND_BRUTE = 2,
  QPOS_BACKEND_QUANTUM_BRUTE = 3,
} QposBackend;

// Result code of every fallible call.
typedef enum QposStatus {
  QPOS_STATUS_OK = 0,
  QPOS_STATUS_NULL_POINTER = 1,
  QPOS_STATUS_INVALID_UTF8 = 2,
  QPOS_STATUS_IO = 3,
  QPOS_STATUS_PARSE = 4,
  QPOS_STATUS_INVALID_ARGUMENT = 5,
  // A size cap was exceeded (enumeration, simulator or tensor limits).
  QPOS_STATUS_LIMIT = 6,
  // A Rust panic was caught at the boundary; the handle arguments are left untouched.
  QPOS_STATUS_PANIC = 7,
} QposStatus;

// A trained or loaded tagging model.
typedef struct QposModel QposModel;

// Diagram T-counts before and after simplification.
typedef struct QposZxReport {
  size_t qubits;
  size_t t_before;
  size_t t_after;
  size_t rewrite_steps;
  // 1 equal up to scalar, 0 not equal, -1 not checked.
  int32_t verified;
} QposZxReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the next failing
// call on the same thread.
const char *qpos_last_error(void);

// Library version as a static string.
const char *qpos_version(void);

// Trains a bigram model with add-`alpha` smoothing from corpus text
// (`word<TAB>tag` lines, blank line between sentences).
//
// # Safety
// `corpus_text` is a NUL-terminated string; `out` points to writable storage for one handle.
enum QposStatus qpos_model_train(const char *corpus_text, double alpha, struct QposModel **out);

// Loads a model saved by [`qpos_model_save`] or the `qpos train` command.
//
// # Safety
// `path` is a NUL-terminated string; `out` points to writable storage for one handle.
enum QposStatus qpos_model_load(const char *path, struct QposModel **out);

// # Safety
// `model` is a live handle; `path` is a NUL-terminated string.
enum QposStatus qpos_model_save(const struct QposModel *model, const char *path);

// Releases a model handle. NULL is ignored.
//
// # Safety
// `model` is NULL or a handle from this library that has not been freed.
void qpos_model_free(struct QposModel *model);

// Number of tags K, or 0 for NULL.
//
// # Safety
// `model` is NULL or a live handle.
size_t qpos_model_num_tags(const struct QposModel *model);

// Vocabulary size N including the unknown-word entry, or 0 for NULL.
//
// # Safety
// `model` is NULL or a live handle.
size_t qpos_model_vocab_size(const struct QposModel *model);

// Label of tag `index`, owned by the model; NULL when out of range.
//
// # Safety
// `model` is NULL or a live handle.
const char *qpos_model_tag_label(const struct QposModel *model, size_t index);

// Decodes `n_words` words with the selected [`QposBackend`]. Writes one tag index per word
// to `out_tags` and the path probability to `out_score` (may be NULL). `seed` and
// `retries` are used by the quantum backends only.
//
// # Safety
// `words` points to `n_words` NUL-terminated strings; `out_tags` has room for `n_words`
// entries; `model` is a live handle.
enum QposStatus qpos_tag(const struct QposModel *model,
                         const char *const *words,
                         size_t n_words,
                         uint32_t backend,
                         uint64_t seed,
                         size_t retries,
                         size_t *out_tags,
                         double *out_score);

// Quantum maximum finding over `len` finite values with the default query budget.
// Any of the out pointers may be NULL.
//
// # Safety
// `values` points to `len` readable doubles.
enum QposStatus qpos_quantum_max(const double *values,
                                 size_t len,
                                 uint64_t seed,
                                 double *out_value,
                                 size_t *out_index,
                                 uint64_t *out_queries);

// Parses a circuit in the line format (`H 0`, `CNOT 0 1`, `RZ 1 pi/8`, ...), simplifies
// its ZX diagram and reports the T-counts. `verify` (at most 8 qubits) compares the
// tensors before and after.
//
// # Safety
// `circuit_text` is a NUL-terminated string; `out` points to a writable report.
enum QposStatus qpos_zx_optimize(const char *circuit_text,
                                 bool zero_inputs,
                                 bool verify,
                                 struct QposZxReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPOS_H */
