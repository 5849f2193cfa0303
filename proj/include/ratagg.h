/* ratagg — alpha-fair traffic aggregation for multi-RAT networks.
 *
 * C interface of the shared library. Objects are opaque handles created and
 * released through these functions; every fallible call returns a status code
 * and leaves a human-readable message in ratagg_last_error() (thread-local).
 * Strings returned through char** are owned by the caller and released with
 * ratagg_string_free().
 */
#ifndef RATAGG_H
#define RATAGG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ratagg_status {
  RATAGG_OK = 0,
  RATAGG_ERR_INVALID_ARGUMENT = 1,
  RATAGG_ERR_PARSE = 2,
  RATAGG_ERR_VALIDATION = 3,
  RATAGG_ERR_SOLVER = 4,
  RATAGG_ERR_UNSUPPORTED = 5,
  RATAGG_ERR_TOO_LARGE = 6,
  RATAGG_ERR_VERIFY = 7,
  RATAGG_ERR_IO = 8
} ratagg_status;

typedef struct ratagg_scenario ratagg_scenario;
typedef struct ratagg_allocation ratagg_allocation;
typedef struct ratagg_report ratagg_report;

typedef enum ratagg_step_schedule {
  RATAGG_STEP_SQRT = 0,
  RATAGG_STEP_HARMONIC = 1,
  RATAGG_STEP_CONSTANT = 2
} ratagg_step_schedule;

typedef struct ratagg_solve_options {
  uint32_t max_iterations;
  ratagg_step_schedule step_schedule;
  double epsilon0;
  double initial_lambda; /* <= 0: scale-based default */
  double tie_tolerance;
  double stop_tolerance;
  double lambda_floor;
  int refine;       /* nonzero: structure refinement after the subgradient phase */
  int record_trace; /* nonzero: keep the per-iteration trace for trace_csv */
} ratagg_solve_options;

void ratagg_solve_options_init(ratagg_solve_options* opts);

const char* ratagg_version(void);
const char* ratagg_status_name(ratagg_status status);
/* Message of the last failing call on this thread; empty string otherwise. */
const char* ratagg_last_error(void);
/* Detailed error code name (e.g. "EmptyRat") of the last failing call. */
const char* ratagg_last_error_name(void);

/* ---- scenarios ---- */

ratagg_status ratagg_scenario_from_json(const char* json_text,
                                        ratagg_scenario** out);
ratagg_status ratagg_scenario_to_json(const ratagg_scenario* s, char** out_json);
/* params_json may be NULL for defaults; see ratagg_default_params_json. */
ratagg_status ratagg_scenario_generate(const char* params_json, uint64_t seed,
                                       uint32_t num_users, uint32_t num_rats,
                                       ratagg_scenario** out);
ratagg_status ratagg_default_params_json(uint32_t num_rats, char** out_json);
void ratagg_scenario_free(ratagg_scenario* s);

uint32_t ratagg_scenario_num_users(const ratagg_scenario* s);
uint32_t ratagg_scenario_num_rats(const ratagg_scenario* s);
double ratagg_scenario_alpha(const ratagg_scenario* s);
ratagg_status ratagg_scenario_set_alpha(ratagg_scenario* s, double alpha);
double ratagg_scenario_peak_rate(const ratagg_scenario* s, uint32_t user,
                                 uint32_t rat);

/* ---- solving ---- */

ratagg_status ratagg_solve(const ratagg_scenario* s,
                           const ratagg_solve_options* opts_or_null,
                           ratagg_report** out);

/* rounds > 0 runs exactly that many exchange rounds (stop rule disabled).
 * assume_csi_at_rat drops the rate term from the payload accounting only.
 * verify reruns the centralized solver and fails on any load-indicator
 * difference. record_messages keeps the full exchange for messages_jsonl. */
ratagg_status ratagg_solve_decentralized(const ratagg_scenario* s,
                                         const ratagg_solve_options* opts_or_null,
                                         uint32_t rounds, int assume_csi_at_rat,
                                         int record_messages, int verify,
                                         ratagg_report** out);

/* ---- reports ---- */

ratagg_status ratagg_report_to_json(const ratagg_report* r, char** out_json);
ratagg_status ratagg_report_trace_csv(const ratagg_report* r, char** out_csv);
ratagg_status ratagg_report_messages_jsonl(const ratagg_report* r,
                                           char** out_jsonl);
double ratagg_report_dual_objective(const ratagg_report* r);
double ratagg_report_primal_utility(const ratagg_report* r);
double ratagg_report_kkt_residual(const ratagg_report* r);
double ratagg_report_gap_bound(const ratagg_report* r);
uint32_t ratagg_report_splitter_count(const ratagg_report* r);
uint32_t ratagg_report_iterations(const ratagg_report* r);
/* -1 when the report does not come from a decentralized run. */
int64_t ratagg_report_message_count(const ratagg_report* r);
ratagg_status ratagg_report_lambdas(const ratagg_report* r, double* out,
                                    size_t len);
ratagg_status ratagg_report_allocation(const ratagg_report* r,
                                       ratagg_allocation** out);
void ratagg_report_free(ratagg_report* r);

/* ---- allocations ---- */

uint32_t ratagg_allocation_num_users(const ratagg_allocation* a);
uint32_t ratagg_allocation_num_rats(const ratagg_allocation* a);
/* Row-major num_users x num_rats buffer. */
ratagg_status ratagg_allocation_fractions(const ratagg_allocation* a,
                                          double* out, size_t len);
ratagg_status ratagg_allocation_throughputs(const ratagg_allocation* a,
                                            double* out, size_t len);
ratagg_status ratagg_allocation_utility(const ratagg_allocation* a, double alpha,
                                        double* out);
void ratagg_allocation_free(ratagg_allocation* a);

/* ---- single-RAT baseline policies ---- */

ratagg_status ratagg_baseline_greedy(const ratagg_scenario* s,
                                     ratagg_allocation** out);
ratagg_status ratagg_baseline_threshold(const ratagg_scenario* s,
                                        uint32_t primary_rat,
                                        double snr_proxy_threshold,
                                        double offload_threshold,
                                        ratagg_allocation** out);
ratagg_status ratagg_tune_thresholds(const ratagg_scenario* const* scenarios,
                                     size_t count, uint32_t primary_rat,
                                     const double* snr_candidates,
                                     size_t snr_count,
                                     const double* offload_candidates,
                                     size_t offload_count, double* best_snr,
                                     double* best_offload,
                                     double* best_mean_utility);

/* ---- small helpers shared with the CLI ---- */

ratagg_status ratagg_percentile_nearest_rank(const double* values, size_t count,
                                             double percentile, double* out);

void ratagg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RATAGG_H */
