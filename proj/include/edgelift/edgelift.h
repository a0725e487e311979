#ifndef EDGELIFT_H
#define EDGELIFT_H

/* C interface to the edgelift shared library.
 *
 * All entry points return a status code (EDGELIFT_OK on success); the
 * message for the most recent failure on the calling thread is available
 * through edgelift_last_error_message(). Objects are opaque handles owned
 * by the caller and released with the matching _free function.
 */

#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

enum {
    EDGELIFT_OK = 0,
    EDGELIFT_ERR_IO = 1,
    EDGELIFT_ERR_SCHEMA = 2,
    EDGELIFT_ERR_INVALID_ARGUMENT = 3,
    EDGELIFT_ERR_DISCONNECTED_GRAPH = 4,
    EDGELIFT_ERR_DOMAIN = 5,
    EDGELIFT_ERR_NON_FINITE = 6,
    EDGELIFT_ERR_RANK_DEFICIENT = 7,
    EDGELIFT_ERR_DEGENERATE_WINDOW = 8,
    EDGELIFT_ERR_INTERNAL = 9
};

typedef struct edgelift_scenario edgelift_scenario;
typedef struct edgelift_options edgelift_options;
typedef struct edgelift_report edgelift_report;

const char* edgelift_version(void);

/* Last failure on this thread: code and human-readable message. */
int edgelift_last_error_code(void);
const char* edgelift_last_error_message(void);

/* Scenario lifecycle. */
int edgelift_scenario_parse(const char* json_text, edgelift_scenario** out);
int edgelift_scenario_load_file(const char* path, edgelift_scenario** out);
void edgelift_scenario_free(edgelift_scenario* scenario);

/* Run options; unset fields fall back to the scenario values. */
edgelift_options* edgelift_options_new(void);
void edgelift_options_free(edgelift_options* options);
int edgelift_options_set_seed(edgelift_options* options, uint64_t seed);
int edgelift_options_set_samples(edgelift_options* options, int num_samples);
int edgelift_options_set_dt(edgelift_options* options, double dt);
int edgelift_options_set_t_final(edgelift_options* options, double t_final);
int edgelift_options_set_tree_cap(edgelift_options* options, int tree_cap);

/* Runs. `options` may be NULL. `out_dir` may be NULL to skip file output.
 * A refuted or inconclusive certificate is still EDGELIFT_OK; the verdict
 * is exposed through edgelift_report_exit_code. */
int edgelift_run_check(const edgelift_scenario* scenario, const edgelift_options* options,
                       edgelift_report** out);
int edgelift_run_rank(const edgelift_scenario* scenario, const edgelift_options* options,
                      edgelift_report** out);
int edgelift_run_matching(const edgelift_scenario* scenario, const edgelift_options* options,
                          const char* out_dir, edgelift_report** out);
int edgelift_run_simulate(const edgelift_scenario* scenario, const edgelift_options* options,
                          const char* out_dir, edgelift_report** out);

/* Report accessors. Strings are owned by the report and valid until
 * edgelift_report_free; absent artifacts return NULL. */
const char* edgelift_report_json(const edgelift_report* report);
const char* edgelift_report_dot(const edgelift_report* report);
const char* edgelift_report_csv(const edgelift_report* report);

/* check: 0 = certified_generic, 2 = refuted_structurally,
 * 3 = inconclusive. Other runs report 0. */
int edgelift_report_exit_code(const edgelift_report* report);

void edgelift_report_free(edgelift_report* report);

#if defined(__cplusplus)
}
#endif

#endif /* EDGELIFT_H */
