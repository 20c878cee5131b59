#ifndef PARLINE_H
#define PARLINE_H

/* C interface to the parline library. Every call returns a pl_status; on
 * failure pl_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * pl_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PL_API __declspec(dllexport)
#else
#define PL_API __attribute__((visibility("default")))
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_ERR_NULL = 1,
  PL_ERR_INVALID = 2,
  PL_ERR_PARSE = 3,
  PL_ERR_DOMAIN = 4,
  PL_ERR_INTERNAL = 5
} pl_status;

typedef struct pl_map pl_map;
typedef struct pl_record pl_record;

typedef struct pl_search_config {
  double delta;
  double tol;
  int restarts;
  int max_iters;
  uint64_t seed;
  double zero_eps;
  double step;
  double reflect;
  double expand;
  double contract;
  double shrink;
  int threads;
} pl_search_config;

typedef struct pl_singularity_config {
  int samples;
  double noise;
  double tol;
  double ratio_threshold;
  int max_iters;
  uint64_t seed;
} pl_singularity_config;

typedef struct pl_table_row {
  int m;
  int r;
  int q;
  int n;
  int thm_a;
  int thm_b;
  int cor;
  int prop_q_top;
} pl_table_row;

PL_API const char* pl_version(void);
PL_API const char* pl_last_error(void);
PL_API void pl_string_free(char* s);

/* --- characteristic classes --- */

/* check: prelude, theorem_b, theorem_a, theorem_a_v2, corollary, prop_q.
 * n is used by prelude and prop_q only. A theorem_a_v2 request on the
 * boundary m+1 = 2^{r-1} returns PL_ERR_DOMAIN. */
PL_API pl_status pl_check(const char* check, int m, int n, char** out_json);
/* All reports for one m as JSON lines; *all_consistent is 1 when every
 * report matches its prediction. */
PL_API pl_status pl_verify_classes(int m, char** out_jsonl, int* all_consistent);
PL_API pl_status pl_hurwitz(int m, char** out_json);
PL_API pl_status pl_table_row_compute(int m, pl_table_row* out);
PL_API pl_status pl_prop_q_top_degree(int m, int* out);

/* first/second select t1 (bit 0) and t2 (bit 1) in each line's Euler class. */
PL_API pl_status pl_oracle_product(int m1, int m2, int n, unsigned first, unsigned second, int* holds);
PL_API pl_status pl_oracle_dual(int k, int n, int mutate_rewrite, int* holds);

/* --- maps --- */

PL_API pl_status pl_map_from_json(const char* json, pl_map** out);
PL_API pl_status pl_map_builtin(const char* name, int m, int n, int degree, uint64_t seed, pl_map** out);
PL_API void pl_map_free(pl_map* map);
PL_API pl_status pl_map_to_json(const pl_map* map, char** out_json);
PL_API pl_status pl_map_dims(const pl_map* map, int* domain_dim, int* codomain_dim);
PL_API pl_status pl_map_digest(const pl_map* map, char** out);
PL_API pl_status pl_map_eval(const pl_map* map, const double* p, size_t p_len, double* out, size_t out_len);

/* --- witnesses --- */

PL_API void pl_search_config_default(pl_search_config* cfg);
PL_API void pl_singularity_config_default(pl_singularity_config* cfg);

/* case: parallel_b (or b), parallel_a (or a), collinear, linear_dependence. */
PL_API pl_status pl_search(const pl_map* map, const char* kase, const pl_search_config* cfg, pl_record** out);
PL_API pl_status pl_record_from_json(const char* json, pl_record** out);
PL_API void pl_record_free(pl_record* rec);
PL_API pl_status pl_record_to_json(const pl_record* rec, char** out_json);
PL_API pl_status pl_record_found(const pl_record* rec, int* found);
PL_API pl_status pl_record_residual(const pl_record* rec, double* residual);
/* Guarantee label ("guaranteed" / "exploratory") and its explanation. */
PL_API pl_status pl_record_guarantee(const pl_record* rec, char** label, char** note);

PL_API pl_status pl_verify_witness(const pl_record* rec, const pl_map* map, double tol, int* passed,
                                   char** out_json);
/* *out receives the record; out_json (optional) the branch report. */
PL_API pl_status pl_find_1d(const pl_map* map, double a, double b, double tol, pl_record** out, char** out_json);
PL_API pl_status pl_singularity(const pl_map* map, const pl_record* base, const pl_singularity_config* cfg,
                                char** out_json);

#ifdef __cplusplus
}
#endif

#endif
