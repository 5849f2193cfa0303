#include "ratagg.h"

#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "core/baselines.hpp"
#include "core/metrics.hpp"
#include "core/model.hpp"
#include "core/solve.hpp"
#include "core/synth.hpp"
#include "core/utility.hpp"

struct ratagg_scenario {
  ratagg::Scenario s;
};
struct ratagg_allocation {
  ratagg::Allocation a;
};
struct ratagg_report {
  ratagg::SolveReport report;
  ratagg::ProtocolTrace trace;  // only for decentralized runs
  bool decentralized = false;
  bool assume_csi = false;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_name;

ratagg_status map_errc(ratagg::Errc code) {
  using ratagg::Errc;
  switch (code) {
    case Errc::invalid_argument:
      return RATAGG_ERR_INVALID_ARGUMENT;
    case Errc::parse_error:
      return RATAGG_ERR_PARSE;
    case Errc::io_error:
      return RATAGG_ERR_IO;
    case Errc::zero_coverage_user:
    case Errc::empty_rat:
    case Errc::non_finite:
    case Errc::negative_alpha:
    case Errc::domain_error:
    case Errc::zero_throughput:
    case Errc::infeasible:
      return RATAGG_ERR_VALIDATION;
    case Errc::alpha_zero_unsupported:
      return RATAGG_ERR_UNSUPPORTED;
    case Errc::too_large:
      return RATAGG_ERR_TOO_LARGE;
    case Errc::verify_mismatch:
      return RATAGG_ERR_VERIFY;
    case Errc::infeasible_tie_structure:
    case Errc::negative_fraction:
    case Errc::too_many_splitters:
    case Errc::degenerate_instance:
      return RATAGG_ERR_SOLVER;
  }
  return RATAGG_ERR_SOLVER;
}

template <typename Fn>
ratagg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    g_last_error_name.clear();
    return RATAGG_OK;
  } catch (const ratagg::Error& e) {
    g_last_error = e.what();
    g_last_error_name = ratagg::errc_name(e.code());
    return map_errc(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    g_last_error_name = "Internal";
    return RATAGG_ERR_SOLVER;
  }
}

ratagg_status invalid(const char* message) {
  g_last_error = message;
  g_last_error_name = "InvalidArgument";
  return RATAGG_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

ratagg::SolverConfig to_config(const ratagg_solve_options* opts) {
  ratagg::SolverConfig cfg;
  if (!opts) return cfg;
  cfg.max_iterations = static_cast<int>(opts->max_iterations);
  switch (opts->step_schedule) {
    case RATAGG_STEP_SQRT: cfg.step_schedule = ratagg::StepSchedule::kSqrt; break;
    case RATAGG_STEP_HARMONIC:
      cfg.step_schedule = ratagg::StepSchedule::kHarmonic;
      break;
    case RATAGG_STEP_CONSTANT:
      cfg.step_schedule = ratagg::StepSchedule::kConstant;
      break;
  }
  cfg.epsilon0 = opts->epsilon0;
  if (opts->initial_lambda > 0.0)
    cfg.initial_lambda = {opts->initial_lambda};
  cfg.tie_tolerance = opts->tie_tolerance;
  cfg.stop_tolerance = opts->stop_tolerance;
  cfg.lambda_floor = opts->lambda_floor;
  cfg.refine = opts->refine != 0;
  cfg.record_trace = opts->record_trace != 0;
  return cfg;
}

}  // namespace

extern "C" {

void ratagg_solve_options_init(ratagg_solve_options* opts) {
  if (!opts) return;
  const ratagg::SolverConfig cfg;
  opts->max_iterations = static_cast<uint32_t>(cfg.max_iterations);
  opts->step_schedule = RATAGG_STEP_SQRT;
  opts->epsilon0 = cfg.epsilon0;
  opts->initial_lambda = 0.0;
  opts->tie_tolerance = cfg.tie_tolerance;
  opts->stop_tolerance = cfg.stop_tolerance;
  opts->lambda_floor = cfg.lambda_floor;
  opts->refine = cfg.refine ? 1 : 0;
  opts->record_trace = 0;
}

const char* ratagg_version(void) { return "0.1.0"; }

const char* ratagg_status_name(ratagg_status status) {
  switch (status) {
    case RATAGG_OK: return "ok";
    case RATAGG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RATAGG_ERR_PARSE: return "parse_error";
    case RATAGG_ERR_VALIDATION: return "validation_error";
    case RATAGG_ERR_SOLVER: return "solver_error";
    case RATAGG_ERR_UNSUPPORTED: return "unsupported";
    case RATAGG_ERR_TOO_LARGE: return "too_large";
    case RATAGG_ERR_VERIFY: return "verify_mismatch";
    case RATAGG_ERR_IO: return "io_error";
  }
  return "unknown";
}

const char* ratagg_last_error(void) { return g_last_error.c_str(); }
const char* ratagg_last_error_name(void) { return g_last_error_name.c_str(); }

ratagg_status ratagg_scenario_from_json(const char* json_text,
                                        ratagg_scenario** out) {
  if (!json_text || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ratagg_scenario{ratagg::scenario_from_json(json_text)};
  });
}

ratagg_status ratagg_scenario_to_json(const ratagg_scenario* s, char** out_json) {
  if (!s || !out_json) return invalid("null argument");
  return guarded([&] { *out_json = copy_string(ratagg::scenario_to_json(s->s)); });
}

ratagg_status ratagg_scenario_generate(const char* params_json, uint64_t seed,
                                       uint32_t num_users, uint32_t num_rats,
                                       ratagg_scenario** out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    const ratagg::GeneratorParams params =
        params_json ? ratagg::params_from_json(params_json, int(num_rats))
                    : ratagg::default_params(int(num_rats));
    *out = new ratagg_scenario{
        ratagg::generate(seed, int(num_users), int(num_rats), params)};
  });
}

ratagg_status ratagg_default_params_json(uint32_t num_rats, char** out_json) {
  if (!out_json) return invalid("null argument");
  return guarded([&] {
    *out_json =
        copy_string(ratagg::params_to_json(ratagg::default_params(int(num_rats))));
  });
}

void ratagg_scenario_free(ratagg_scenario* s) { delete s; }

uint32_t ratagg_scenario_num_users(const ratagg_scenario* s) {
  return s ? uint32_t(s->s.num_users) : 0;
}
uint32_t ratagg_scenario_num_rats(const ratagg_scenario* s) {
  return s ? uint32_t(s->s.num_rats) : 0;
}
double ratagg_scenario_alpha(const ratagg_scenario* s) {
  return s ? s->s.alpha : 0.0;
}

ratagg_status ratagg_scenario_set_alpha(ratagg_scenario* s, double alpha) {
  if (!s) return invalid("null argument");
  return guarded([&] {
    ratagg::Scenario copy = s->s;
    copy.alpha = alpha;
    s->s = ratagg::validate_scenario(std::move(copy));
  });
}

double ratagg_scenario_peak_rate(const ratagg_scenario* s, uint32_t user,
                                 uint32_t rat) {
  if (!s || user >= uint32_t(s->s.num_users) || rat >= uint32_t(s->s.num_rats))
    return 0.0;
  return s->s.rate(int(user), int(rat));
}

ratagg_status ratagg_solve(const ratagg_scenario* s,
                           const ratagg_solve_options* opts,
                           ratagg_report** out) {
  if (!s || !out) return invalid("null argument");
  return guarded([&] {
    auto* r = new ratagg_report;
    try {
      r->report = ratagg::solve_scenario(s->s, to_config(opts));
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

ratagg_status ratagg_solve_decentralized(const ratagg_scenario* s,
                                         const ratagg_solve_options* opts,
                                         uint32_t rounds, int assume_csi_at_rat,
                                         int record_messages, int verify,
                                         ratagg_report** out) {
  if (!s || !out) return invalid("null argument");
  return guarded([&] {
    auto* r = new ratagg_report;
    try {
      ratagg::DecentralizedRun run = ratagg::solve_decentralized_scenario(
          s->s, to_config(opts), int(rounds), assume_csi_at_rat != 0,
          record_messages != 0, verify != 0);
      r->report = std::move(run.report);
      r->trace = std::move(run.trace);
      r->decentralized = true;
      r->assume_csi = assume_csi_at_rat != 0;
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

ratagg_status ratagg_report_to_json(const ratagg_report* r, char** out_json) {
  if (!r || !out_json) return invalid("null argument");
  return guarded(
      [&] { *out_json = copy_string(ratagg::report_to_json(r->report)); });
}

ratagg_status ratagg_report_trace_csv(const ratagg_report* r, char** out_csv) {
  if (!r || !out_csv) return invalid("null argument");
  if (r->report.trace.empty())
    return invalid("no trace was recorded; set record_trace");
  return guarded(
      [&] { *out_csv = copy_string(ratagg::trace_to_csv(r->report.trace)); });
}

ratagg_status ratagg_report_messages_jsonl(const ratagg_report* r,
                                           char** out_jsonl) {
  if (!r || !out_jsonl) return invalid("null argument");
  if (!r->decentralized || !r->trace.recorded)
    return invalid("no message trace; run decentralized with record_messages");
  return guarded([&] {
    *out_jsonl = copy_string(ratagg::messages_to_jsonl(
        r->trace, r->report.allocation.num_rats, r->assume_csi));
  });
}

double ratagg_report_dual_objective(const ratagg_report* r) {
  return r ? r->report.dual_objective : 0.0;
}
double ratagg_report_primal_utility(const ratagg_report* r) {
  return r ? r->report.primal_utility : 0.0;
}
double ratagg_report_kkt_residual(const ratagg_report* r) {
  return r ? r->report.kkt_residual : 0.0;
}
double ratagg_report_gap_bound(const ratagg_report* r) {
  return r ? r->report.duality_gap_bound : 0.0;
}
uint32_t ratagg_report_splitter_count(const ratagg_report* r) {
  return r ? uint32_t(r->report.splitter_count) : 0;
}
uint32_t ratagg_report_iterations(const ratagg_report* r) {
  return r ? uint32_t(r->report.iterations_used) : 0;
}
int64_t ratagg_report_message_count(const ratagg_report* r) {
  if (!r || !r->report.message_count) return -1;
  return *r->report.message_count;
}

ratagg_status ratagg_report_lambdas(const ratagg_report* r, double* out,
                                    size_t len) {
  if (!r || !out) return invalid("null argument");
  if (len < r->report.lambdas.size()) return invalid("buffer too small");
  std::memcpy(out, r->report.lambdas.data(),
              r->report.lambdas.size() * sizeof(double));
  return RATAGG_OK;
}

ratagg_status ratagg_report_allocation(const ratagg_report* r,
                                       ratagg_allocation** out) {
  if (!r || !out) return invalid("null argument");
  return guarded([&] { *out = new ratagg_allocation{r->report.allocation}; });
}

void ratagg_report_free(ratagg_report* r) { delete r; }

uint32_t ratagg_allocation_num_users(const ratagg_allocation* a) {
  return a ? uint32_t(a->a.num_users) : 0;
}
uint32_t ratagg_allocation_num_rats(const ratagg_allocation* a) {
  return a ? uint32_t(a->a.num_rats) : 0;
}

ratagg_status ratagg_allocation_fractions(const ratagg_allocation* a,
                                          double* out, size_t len) {
  if (!a || !out) return invalid("null argument");
  if (len < a->a.fractions.size()) return invalid("buffer too small");
  std::memcpy(out, a->a.fractions.data(), a->a.fractions.size() * sizeof(double));
  return RATAGG_OK;
}

ratagg_status ratagg_allocation_throughputs(const ratagg_allocation* a,
                                            double* out, size_t len) {
  if (!a || !out) return invalid("null argument");
  if (len < a->a.throughputs.size()) return invalid("buffer too small");
  std::memcpy(out, a->a.throughputs.data(),
              a->a.throughputs.size() * sizeof(double));
  return RATAGG_OK;
}

ratagg_status ratagg_allocation_utility(const ratagg_allocation* a, double alpha,
                                        double* out) {
  if (!a || !out) return invalid("null argument");
  return guarded([&] { *out = ratagg::network_utility(a->a, alpha); });
}

void ratagg_allocation_free(ratagg_allocation* a) { delete a; }

ratagg_status ratagg_baseline_greedy(const ratagg_scenario* s,
                                     ratagg_allocation** out) {
  if (!s || !out) return invalid("null argument");
  return guarded(
      [&] { *out = new ratagg_allocation{ratagg::greedy_association(s->s)}; });
}

ratagg_status ratagg_baseline_threshold(const ratagg_scenario* s,
                                        uint32_t primary_rat,
                                        double snr_proxy_threshold,
                                        double offload_threshold,
                                        ratagg_allocation** out) {
  if (!s || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ratagg_allocation{ratagg::threshold_association(
        s->s, int(primary_rat), snr_proxy_threshold, offload_threshold)};
  });
}

ratagg_status ratagg_tune_thresholds(const ratagg_scenario* const* scenarios,
                                     size_t count, uint32_t primary_rat,
                                     const double* snr_candidates,
                                     size_t snr_count,
                                     const double* offload_candidates,
                                     size_t offload_count, double* best_snr,
                                     double* best_offload,
                                     double* best_mean_utility) {
  if (!scenarios || !snr_candidates || !offload_candidates || !best_snr ||
      !best_offload || !best_mean_utility)
    return invalid("null argument");
  return guarded([&] {
    std::vector<ratagg::Scenario> set;
    set.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!scenarios[i]) ratagg::fail(ratagg::Errc::invalid_argument, "null scenario");
      set.push_back(scenarios[i]->s);
    }
    const ratagg::ThresholdChoice choice = ratagg::tune_thresholds(
        set, int(primary_rat),
        std::vector<double>(snr_candidates, snr_candidates + snr_count),
        std::vector<double>(offload_candidates,
                            offload_candidates + offload_count));
    *best_snr = choice.snr_proxy_threshold;
    *best_offload = choice.offload_threshold;
    *best_mean_utility = choice.mean_utility;
  });
}

ratagg_status ratagg_percentile_nearest_rank(const double* values, size_t count,
                                             double percentile, double* out) {
  if (!values || !out) return invalid("null argument");
  return guarded([&] {
    *out = ratagg::percentile_nearest_rank(
        std::vector<double>(values, values + count), percentile);
  });
}

void ratagg_string_free(char* s) { delete[] s; }

}  // extern "C"
