/*
 * C interface to the qaoa_fipso library.
 *
 * Objects are opaque handles created by qf_*_create / qf_*_read functions and
 * released with the matching qf_*_free. Every fallible call returns a
 * qf_status; on failure qf_last_error() describes the problem and any handle
 * output is left NULL. Strings handed
 * out through char** parameters are owned by the caller and must be released
 * with qf_string_free.
 *
 * Parameter vectors are laid out as [gamma_1..gamma_p, beta_1..beta_p].
 * Partition masks are little-endian: bit i is the side of vertex i.
 */
#ifndef QAOA_FIPSO_H
#define QAOA_FIPSO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QAOA_FIPSO_BUILDING)
#    define QF_API __declspec(dllexport)
#  else
#    define QF_API __declspec(dllimport)
#  endif
#else
#  define QF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qf_status {
  QF_OK = 0,
  QF_ERR_ARGUMENT = 1,
  QF_ERR_CAPACITY = 2,
  QF_ERR_DIMENSION = 3,
  QF_ERR_PARSE = 4,
  QF_ERR_VALIDATION = 5,
  QF_ERR_NUMERICAL = 6,
  QF_ERR_UNDEFINED = 7,
  QF_ERR_IO = 8,
  QF_ERR_INTERNAL = 9
} qf_status;

typedef struct qf_graph qf_graph;
typedef struct qf_swarm_config qf_swarm_config;
typedef struct qf_optimize_result qf_optimize_result;
typedef struct qf_suite_config qf_suite_config;

QF_API const char* qf_version(void);
/* Message of the last failed call on this thread; "" if none. */
QF_API const char* qf_last_error(void);
QF_API const char* qf_status_name(qf_status status);
QF_API void qf_string_free(char* s);

/* ---- graphs ------------------------------------------------------------ */

/* edge_pairs holds edge_count (i, j) pairs, 2 * edge_count ints. */
QF_API qf_status qf_graph_create(int n, const int* edge_pairs, size_t edge_count, qf_graph** out);
QF_API qf_status qf_graph_generate_er(int n, double edge_prob, uint64_t seed, qf_graph** out);
QF_API qf_status qf_graph_generate_ws(int n, int k, double rewire_prob, uint64_t seed,
                                      qf_graph** out);
QF_API qf_status qf_ws_k_for(int n, int* k_out);
QF_API qf_status qf_graph_read(const char* path, qf_graph** out);
QF_API qf_status qf_graph_write(const qf_graph* g, const char* path);
QF_API void qf_graph_free(qf_graph* g);

QF_API int qf_graph_node_count(const qf_graph* g);
QF_API size_t qf_graph_edge_count(const qf_graph* g);
/* Copies edges as normalized (i < j) pairs; capacity counts pairs. */
QF_API qf_status qf_graph_edges(const qf_graph* g, int* pairs_out, size_t capacity);

/* ---- cuts -------------------------------------------------------------- */

QF_API qf_status qf_cut_size(const qf_graph* g, uint64_t mask, int* out);
QF_API qf_status qf_maxcut_bruteforce(const qf_graph* g, int* value, uint64_t* mask);
QF_API qf_status qf_one_exchange_cut(const qf_graph* g, uint64_t seed, int* value, uint64_t* mask);

/* ---- simulation -------------------------------------------------------- */

QF_API qf_status qf_qaoa_expectation(const qf_graph* g, int p, const double* gamma,
                                     const double* beta, double* out);
/* values_out receives resolution * resolution entries, gamma-major. */
QF_API qf_status qf_landscape(const qf_graph* g, double gamma_lo, double gamma_hi, double beta_lo,
                              double beta_hi, int resolution, double* values_out);
/* CSV text with header gamma,beta,expectation. */
QF_API qf_status qf_landscape_csv(const qf_graph* g, double gamma_lo, double gamma_hi,
                                  double beta_lo, double beta_hi, int resolution, char** csv_out);

/* ---- optimizer --------------------------------------------------------- */

QF_API qf_status qf_swarm_config_create(qf_swarm_config** out);
QF_API qf_status qf_swarm_config_from_json(const char* json, qf_swarm_config** out);
QF_API qf_status qf_swarm_config_read(const char* path, qf_swarm_config** out);
QF_API qf_status qf_swarm_config_set_seed(qf_swarm_config* cfg, uint64_t seed);
QF_API qf_status qf_swarm_config_get_seed(const qf_swarm_config* cfg, uint64_t* seed);
/* Non-zero when the JSON the config came from carried a "seed" field. */
QF_API int qf_swarm_config_has_explicit_seed(const qf_swarm_config* cfg);
QF_API qf_status qf_swarm_config_to_json(const qf_swarm_config* cfg, char** json_out);
QF_API void qf_swarm_config_free(qf_swarm_config* cfg);

/* Optimizes depth-p angles with the brute-force MaxCut as the target cut. */
QF_API qf_status qf_optimize(const qf_graph* g, int p, const qf_swarm_config* cfg,
                             qf_optimize_result** out);
QF_API qf_status qf_optimize_with_target(const qf_graph* g, int p, double c_target,
                                         const qf_swarm_config* cfg, qf_optimize_result** out);
QF_API void qf_optimize_result_free(qf_optimize_result* r);

QF_API size_t qf_optimize_result_dim(const qf_optimize_result* r);
QF_API qf_status qf_optimize_result_position(const qf_optimize_result* r, double* out, size_t capacity);
QF_API double qf_optimize_result_loss(const qf_optimize_result* r);
QF_API double qf_optimize_result_expectation(const qf_optimize_result* r);
QF_API double qf_optimize_result_target(const qf_optimize_result* r);
QF_API size_t qf_optimize_result_iterations(const qf_optimize_result* r);
QF_API size_t qf_optimize_result_evaluations(const qf_optimize_result* r);
/* {opt_params, opt_cut, opt_ar, opt_loss, max_cut, iterations, evaluations} */
QF_API qf_status qf_optimize_result_to_json(const qf_optimize_result* r, char** json_out);

/* ---- experiment suite -------------------------------------------------- */

QF_API qf_status qf_suite_config_create(qf_suite_config** out);
QF_API void qf_suite_config_free(qf_suite_config* cfg);
/* Comma-separated subset of er, ws. */
QF_API qf_status qf_suite_config_set_models(qf_suite_config* cfg, const char* models);
QF_API qf_status qf_suite_config_set_nodes(qf_suite_config* cfg, int lo, int hi);
QF_API qf_status qf_suite_config_set_depths(qf_suite_config* cfg, const int* depths, size_t count);
QF_API qf_status qf_suite_config_set_instances(qf_suite_config* cfg, int instances);
QF_API qf_status qf_suite_config_set_seed(qf_suite_config* cfg, uint64_t base_seed);
QF_API qf_status qf_suite_config_set_probabilities(qf_suite_config* cfg, double er_edge_prob,
                                                   double ws_rewire_prob);
QF_API qf_status qf_suite_config_set_swarm(qf_suite_config* cfg, const qf_swarm_config* swarm);
QF_API qf_status qf_suite_config_set_jobs(qf_suite_config* cfg, int jobs);
QF_API qf_status qf_suite_config_set_allow_large(qf_suite_config* cfg, int allow);
/* Validates; warnings_out gets newline-separated non-fatal warnings (may be empty). */
QF_API qf_status qf_suite_config_validate(const qf_suite_config* cfg, char** warnings_out);
QF_API qf_status qf_suite_config_record_count(const qf_suite_config* cfg, size_t* count);

/* Receives each results-CSV row (without newline) in canonical order. */
typedef void (*qf_record_callback)(const char* csv_row, void* user);

/*
 * Runs the suite, streaming rows to csv_path as they complete. json_path may
 * be NULL to skip the sidecar. summary_out (nullable) receives one line per
 * (model, n, p) cell.
 */
QF_API qf_status qf_suite_run(const qf_suite_config* cfg, const char* csv_path, const char* json_path,
                              qf_record_callback callback, void* user, char** summary_out);

/* Reads a results CSV and renders the improvement tables as text and CSV. */
QF_API qf_status qf_report_from_csv(const char* csv_path, char** text_out, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* QAOA_FIPSO_H */
