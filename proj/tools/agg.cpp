// agg — alpha-fair multi-RAT traffic aggregation from the command line.
//
// Subcommands:
//   solve          solve one scenario and write a report JSON
//   decentralized  message-exchange realization of the same solver
//   compare        aggregation vs single-RAT baselines over a scenario set
//   sweep          synthetic load sweep, aggregated per utilization level
//   generate       emit a synthetic scenario JSON
//
// Everything goes through the shared library's C interface (ratagg.h).

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratagg.h"

namespace fs = std::filesystem;

namespace {

// ---- logging (AGG_LOG=debug|info|warn|error, default warn) ----

int log_level() {
  static int level = [] {
    const char* env = std::getenv("AGG_LOG");
    if (!env) return 2;
    const std::string v(env);
    if (v == "debug") return 0;
    if (v == "info") return 1;
    if (v == "warn") return 2;
    return 3;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() <= 1) std::cerr << "[agg] " << msg << "\n";
}

// ---- error handling ----

struct CliError {
  ratagg_status status;
  std::string message;
};

void require_ok(ratagg_status status, const std::string& context) {
  if (status == RATAGG_OK) return;
  std::string message = ratagg_last_error();
  if (message.empty()) message = ratagg_status_name(status);
  throw CliError{status, context + ": " + message};
}

int exit_code_for(ratagg_status status) {
  switch (status) {
    case RATAGG_OK: return 0;
    case RATAGG_ERR_INVALID_ARGUMENT:
    case RATAGG_ERR_PARSE:
    case RATAGG_ERR_VALIDATION:
    case RATAGG_ERR_IO: return 1;
    case RATAGG_ERR_VERIFY: return 3;
    default: return 2;
  }
}

// ---- C handle RAII ----

struct ScenarioDeleter {
  void operator()(ratagg_scenario* p) const { ratagg_scenario_free(p); }
};
struct ReportDeleter {
  void operator()(ratagg_report* p) const { ratagg_report_free(p); }
};
struct AllocationDeleter {
  void operator()(ratagg_allocation* p) const { ratagg_allocation_free(p); }
};
using ScenarioPtr = std::unique_ptr<ratagg_scenario, ScenarioDeleter>;
using ReportPtr = std::unique_ptr<ratagg_report, ReportDeleter>;
using AllocationPtr = std::unique_ptr<ratagg_allocation, AllocationDeleter>;

std::string take_string(char* s) {
  std::string out(s ? s : "");
  ratagg_string_free(s);
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{RATAGG_ERR_IO, "cannot read " + path.string()};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{RATAGG_ERR_IO, "cannot write " + path.string()};
  out << content;
  if (!out) throw CliError{RATAGG_ERR_IO, "short write to " + path.string()};
}

ScenarioPtr load_scenario(const fs::path& path, double alpha_override) {
  ratagg_scenario* raw = nullptr;
  require_ok(ratagg_scenario_from_json(read_file(path).c_str(), &raw),
             path.string());
  ScenarioPtr s(raw);
  if (alpha_override >= 0.0)
    require_ok(ratagg_scenario_set_alpha(s.get(), alpha_override),
               "setting alpha");
  return s;
}

// ---- solver option flags shared by solve/decentralized ----

struct SolveFlags {
  uint32_t iters = 0;
  std::string step = "sqrt";
  double eps0 = -1.0;
  double tie_tol = -1.0;
  double stop_tol = -1.0;
  double initial_lambda = 0.0;
  bool no_refine = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--iters", iters, "max subgradient iterations");
    cmd->add_option("--step", step, "step schedule: sqrt|harmonic|const")
        ->check(CLI::IsMember({"sqrt", "harmonic", "const"}));
    cmd->add_option("--eps0", eps0, "step size scale");
    cmd->add_option("--tie-tol", tie_tol, "relative tie-detection tolerance");
    cmd->add_option("--stop-tol", stop_tol, "stop on lambda movement below this");
    cmd->add_option("--initial-lambda", initial_lambda,
                    "starting load indicator (default: scale-based)");
    cmd->add_flag("--no-refine", no_refine,
                  "skip the structure refinement after the subgradient phase");
  }

  ratagg_solve_options options(bool record_trace) const {
    ratagg_solve_options o;
    ratagg_solve_options_init(&o);
    if (iters > 0) o.max_iterations = iters;
    if (step == "harmonic") o.step_schedule = RATAGG_STEP_HARMONIC;
    if (step == "const") o.step_schedule = RATAGG_STEP_CONSTANT;
    if (eps0 > 0.0) o.epsilon0 = eps0;
    if (tie_tol > 0.0) o.tie_tolerance = tie_tol;
    if (stop_tol >= 0.0) o.stop_tolerance = stop_tol;
    if (initial_lambda > 0.0) o.initial_lambda = initial_lambda;
    o.refine = no_refine ? 0 : 1;
    o.record_trace = record_trace ? 1 : 0;
    return o;
  }
};

// ---- per-allocation statistics for compare/sweep ----

struct PolicyRow {
  std::string scenario;
  std::string policy;
  double utility = 0.0;
  double min_rate = 0.0;
  double p5_rate = 0.0;
  double median_rate = 0.0;
  double sum_rate = 0.0;
  uint32_t splitters = 0;
};

PolicyRow stats_for(const std::string& scenario_id, const std::string& policy,
                    const ratagg_allocation* alloc, double alpha,
                    uint32_t splitters) {
  PolicyRow row;
  row.scenario = scenario_id;
  row.policy = policy;
  row.splitters = splitters;
  const uint32_t users = ratagg_allocation_num_users(alloc);
  std::vector<double> rates(users, 0.0);
  require_ok(ratagg_allocation_throughputs(alloc, rates.data(), rates.size()),
             "reading throughputs");
  require_ok(ratagg_allocation_utility(alloc, alpha, &row.utility),
             "computing utility");
  row.min_rate = *std::min_element(rates.begin(), rates.end());
  row.sum_rate = 0.0;
  for (double r : rates) row.sum_rate += r;
  require_ok(ratagg_percentile_nearest_rank(rates.data(), rates.size(), 5.0,
                                            &row.p5_rate),
             "p5");
  require_ok(ratagg_percentile_nearest_rank(rates.data(), rates.size(), 50.0,
                                            &row.median_rate),
             "median");
  return row;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string rows_to_csv(std::vector<PolicyRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const PolicyRow& a, const PolicyRow& b) {
    return std::tie(a.scenario, a.policy) < std::tie(b.scenario, b.policy);
  });
  std::ostringstream os;
  os << "scenario,policy,utility,min_rate,p5_rate,median_rate,sum_rate,splitters\n";
  for (const PolicyRow& r : rows) {
    os << r.scenario << ',' << r.policy << ',' << format_double(r.utility) << ','
       << format_double(r.min_rate) << ',' << format_double(r.p5_rate) << ','
       << format_double(r.median_rate) << ',' << format_double(r.sum_rate) << ','
       << r.splitters << '\n';
  }
  return os.str();
}

/// Threshold grid from the observed peak rates: quantiles of the primary-RAT
/// rates for the offload threshold, quantiles of the best alternative rate
/// for the quality threshold, plus the never/always extremes.
struct ThresholdGrid {
  std::vector<double> snr;
  std::vector<double> offload;
};

ThresholdGrid build_grid(const std::vector<ratagg_scenario*>& set,
                         uint32_t primary, int points) {
  std::vector<double> primary_rates;
  std::vector<double> other_rates;
  for (const ratagg_scenario* s : set) {
    const uint32_t users = ratagg_scenario_num_users(s);
    const uint32_t rats = ratagg_scenario_num_rats(s);
    for (uint32_t u = 0; u < users; ++u) {
      primary_rates.push_back(ratagg_scenario_peak_rate(s, u, primary));
      double best = 0.0;
      for (uint32_t b = 0; b < rats; ++b)
        if (b != primary)
          best = std::max(best, ratagg_scenario_peak_rate(s, u, b));
      other_rates.push_back(best);
    }
  }
  auto quantiles = [&](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out{0.0};
    for (int k = 1; k < points; ++k)
      out.push_back(v[std::min(v.size() - 1, k * v.size() / points)]);
    out.push_back(HUGE_VAL);
    return out;
  };
  return {quantiles(std::move(other_rates)), quantiles(std::move(primary_rates))};
}

struct CompareResult {
  std::vector<PolicyRow> rows;
  double tuned_snr = 0.0;
  double tuned_offload = 0.0;
};

CompareResult compare_set(const std::vector<ratagg_scenario*>& set,
                          const std::vector<std::string>& ids, double alpha,
                          uint32_t primary, int grid_points,
                          const ratagg_solve_options& opts) {
  CompareResult out;
  const ThresholdGrid grid = build_grid(set, primary, grid_points);
  double tuned_utility = 0.0;
  require_ok(ratagg_tune_thresholds(
                 const_cast<const ratagg_scenario* const*>(set.data()),
                 set.size(), primary, grid.snr.data(), grid.snr.size(),
                 grid.offload.data(), grid.offload.size(), &out.tuned_snr,
                 &out.tuned_offload, &tuned_utility),
             "tuning thresholds");
  log_info("tuned thresholds: snr_proxy=" + format_double(out.tuned_snr) +
           " offload=" + format_double(out.tuned_offload));

  for (size_t i = 0; i < set.size(); ++i) {
    ratagg_report* raw_report = nullptr;
    require_ok(ratagg_solve(set[i], &opts, &raw_report), "solving " + ids[i]);
    ReportPtr report(raw_report);
    ratagg_allocation* raw_alloc = nullptr;
    require_ok(ratagg_report_allocation(report.get(), &raw_alloc), ids[i]);
    AllocationPtr num_alloc(raw_alloc);
    out.rows.push_back(stats_for(ids[i], "num", num_alloc.get(), alpha,
                                 ratagg_report_splitter_count(report.get())));

    ratagg_allocation* raw_greedy = nullptr;
    require_ok(ratagg_baseline_greedy(set[i], &raw_greedy), ids[i]);
    AllocationPtr greedy(raw_greedy);
    out.rows.push_back(stats_for(ids[i], "greedy", greedy.get(), alpha, 0));

    ratagg_allocation* raw_thr = nullptr;
    require_ok(ratagg_baseline_threshold(set[i], primary, out.tuned_snr,
                                         out.tuned_offload, &raw_thr),
               ids[i]);
    AllocationPtr thr(raw_thr);
    out.rows.push_back(stats_for(ids[i], "threshold", thr.get(), alpha, 0));
    log_info("compared " + ids[i]);
  }
  return out;
}

// ---- subcommand state ----

struct Options {
  // solve / decentralized
  std::string scenario_path;
  double alpha = -1.0;
  std::string out_path;
  std::string trace_path;
  SolveFlags flags;
  uint32_t rounds = 0;
  bool verify = false;
  bool assume_csi = false;
  // compare / sweep
  std::string scenario_dir;
  uint32_t primary = 0;
  int grid_points = 20;
  std::string levels = "1,2,3";
  int seeds = 20;
  int base_users = 10;
  int rats = 5;
  uint64_t seed = 1;
  std::string params_path;
  std::string raw_out;
  // generate
  uint32_t users = 10;
};

int cmd_solve(const Options& opt) {
  ScenarioPtr s = load_scenario(opt.scenario_path, opt.alpha);
  const ratagg_solve_options o = opt.flags.options(!opt.trace_path.empty());
  ratagg_report* raw = nullptr;
  require_ok(ratagg_solve(s.get(), &o, &raw), "solve");
  ReportPtr report(raw);
  if (!opt.trace_path.empty()) {
    char* csv = nullptr;
    require_ok(ratagg_report_trace_csv(report.get(), &csv), "trace");
    write_file(opt.trace_path, take_string(csv));
  }
  char* json = nullptr;
  require_ok(ratagg_report_to_json(report.get(), &json), "report");
  write_file(opt.out_path, take_string(json));
  std::cout << "utility=" << format_double(ratagg_report_primal_utility(report.get()))
            << " kkt_residual="
            << format_double(ratagg_report_kkt_residual(report.get()))
            << " splitters=" << ratagg_report_splitter_count(report.get())
            << " iterations=" << ratagg_report_iterations(report.get()) << "\n";
  return 0;
}

int cmd_decentralized(const Options& opt) {
  ScenarioPtr s = load_scenario(opt.scenario_path, opt.alpha);
  const ratagg_solve_options o = opt.flags.options(false);
  const bool record = !opt.trace_path.empty();
  ratagg_report* raw = nullptr;
  require_ok(ratagg_solve_decentralized(s.get(), &o, opt.rounds,
                                        opt.assume_csi ? 1 : 0, record ? 1 : 0,
                                        opt.verify ? 1 : 0, &raw),
             "decentralized solve");
  ReportPtr report(raw);
  if (record) {
    char* jsonl = nullptr;
    require_ok(ratagg_report_messages_jsonl(report.get(), &jsonl), "trace");
    write_file(opt.trace_path, take_string(jsonl));
  }
  char* json = nullptr;
  require_ok(ratagg_report_to_json(report.get(), &json), "report");
  write_file(opt.out_path, take_string(json));
  std::cout << "utility=" << format_double(ratagg_report_primal_utility(report.get()))
            << " messages=" << ratagg_report_message_count(report.get())
            << " rounds=" << ratagg_report_iterations(report.get())
            << (opt.verify ? " verified=1" : "") << "\n";
  return 0;
}

int cmd_compare(const Options& opt) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opt.scenario_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw CliError{RATAGG_ERR_IO, "no .json scenarios in " + opt.scenario_dir};

  std::vector<ScenarioPtr> owners;
  std::vector<ratagg_scenario*> set;
  std::vector<std::string> ids;
  const double alpha = opt.alpha >= 0.0 ? opt.alpha : 1.0;
  for (const fs::path& f : files) {
    owners.push_back(load_scenario(f, alpha));
    set.push_back(owners.back().get());
    ids.push_back(f.stem().string());
  }
  const ratagg_solve_options o = opt.flags.options(false);
  CompareResult result =
      compare_set(set, ids, alpha, opt.primary, opt.grid_points, o);
  write_file(opt.out_path, rows_to_csv(std::move(result.rows)));
  std::cout << "wrote " << opt.out_path << " (" << 3 * files.size() << " rows)\n";
  return 0;
}

int cmd_sweep(const Options& opt) {
  std::vector<double> levels;
  {
    std::stringstream ss(opt.levels);
    std::string item;
    while (std::getline(ss, item, ',')) levels.push_back(std::stod(item));
  }
  if (levels.empty()) throw CliError{RATAGG_ERR_INVALID_ARGUMENT, "no levels"};
  std::string params_json;
  if (!opt.params_path.empty()) params_json = read_file(opt.params_path);

  const double alpha = opt.alpha >= 0.0 ? opt.alpha : 1.0;
  const ratagg_solve_options o = opt.flags.options(false);

  struct Aggregate {
    double utility = 0.0, p5 = 0.0, median = 0.0;
    int n = 0;
  };
  std::vector<PolicyRow> raw_rows;
  std::ostringstream csv;
  csv << "level,policy,scenarios,mean_utility,mean_p5_rate,mean_median_rate\n";
  for (size_t li = 0; li < levels.size(); ++li) {
    const int users =
        std::max(1, int(std::lround(double(opt.base_users) * levels[li])));
    std::vector<ScenarioPtr> owners;
    std::vector<ratagg_scenario*> set;
    std::vector<std::string> ids;
    for (int k = 0; k < opt.seeds; ++k) {
      ratagg_scenario* raw = nullptr;
      require_ok(ratagg_scenario_generate(
                     params_json.empty() ? nullptr : params_json.c_str(),
                     opt.seed + 10007ULL * li + k, uint32_t(users),
                     uint32_t(opt.rats), &raw),
                 "generating level " + format_double(levels[li]));
      owners.emplace_back(raw);
      require_ok(ratagg_scenario_set_alpha(raw, alpha), "setting alpha");
      set.push_back(raw);
      std::ostringstream id;
      id << "L" << format_double(levels[li]) << "_s" << k;
      ids.push_back(id.str());
    }
    log_info("level " + format_double(levels[li]) + ": " +
             std::to_string(set.size()) + " scenarios of " +
             std::to_string(users) + " users");
    CompareResult result =
        compare_set(set, ids, alpha, opt.primary, opt.grid_points, o);

    std::map<std::string, Aggregate> agg;
    for (const PolicyRow& r : result.rows) {
      Aggregate& a = agg[r.policy];
      a.utility += r.utility;
      a.p5 += r.p5_rate;
      a.median += r.median_rate;
      ++a.n;
    }
    for (const auto& [policy, a] : agg) {
      csv << format_double(levels[li]) << ',' << policy << ',' << a.n << ','
          << format_double(a.utility / a.n) << ',' << format_double(a.p5 / a.n)
          << ',' << format_double(a.median / a.n) << '\n';
    }
    for (PolicyRow& r : result.rows) raw_rows.push_back(std::move(r));
  }
  write_file(opt.out_path, csv.str());
  if (!opt.raw_out.empty()) write_file(opt.raw_out, rows_to_csv(raw_rows));
  std::cout << "wrote " << opt.out_path << "\n";
  return 0;
}

int cmd_generate(const Options& opt) {
  std::string params_json;
  if (!opt.params_path.empty()) params_json = read_file(opt.params_path);
  ratagg_scenario* raw = nullptr;
  require_ok(ratagg_scenario_generate(
                 params_json.empty() ? nullptr : params_json.c_str(), opt.seed,
                 opt.users, uint32_t(opt.rats), &raw),
             "generate");
  ScenarioPtr s(raw);
  if (opt.alpha >= 0.0)
    require_ok(ratagg_scenario_set_alpha(s.get(), opt.alpha), "setting alpha");
  char* json = nullptr;
  require_ok(ratagg_scenario_to_json(s.get(), &json), "serialize");
  write_file(opt.out_path, take_string(json));
  std::cout << "wrote " << opt.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-fair traffic aggregation for multi-RAT networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ratagg_version());
  Options opt;

  CLI::App* solve = app.add_subcommand("solve", "solve one scenario");
  solve->add_option("--scenario", opt.scenario_path, "scenario JSON")->required();
  solve->add_option("--alpha", opt.alpha, "override the scenario's alpha");
  solve->add_option("--out", opt.out_path, "report JSON path")->required();
  solve->add_option("--trace", opt.trace_path, "per-iteration trace CSV");
  opt.flags.attach(solve);

  CLI::App* dec = app.add_subcommand("decentralized",
                                     "run the message-exchange realization");
  dec->add_option("--scenario", opt.scenario_path, "scenario JSON")->required();
  dec->add_option("--alpha", opt.alpha, "override the scenario's alpha");
  dec->add_option("--out", opt.out_path, "report JSON path")->required();
  dec->add_option("--rounds", opt.rounds, "run exactly this many rounds");
  dec->add_option("--trace", opt.trace_path, "message trace JSONL");
  dec->add_flag("--verify", opt.verify,
                "fail unless the trajectory matches the centralized solver");
  dec->add_flag("--assume-csi-at-rat", opt.assume_csi,
                "drop the rate term from the payload byte accounting");
  opt.flags.attach(dec);

  CLI::App* cmp = app.add_subcommand("compare",
                                     "aggregation vs baselines over a directory");
  cmp->add_option("--scenario-dir", opt.scenario_dir, "directory of scenario JSONs")
      ->required();
  cmp->add_option("--alpha", opt.alpha, "fairness degree (default 1)");
  cmp->add_option("--out", opt.out_path, "CSV path")->required();
  cmp->add_option("--primary-rat", opt.primary, "primary RAT for thresholds");
  cmp->add_option("--grid-points", opt.grid_points, "threshold grid resolution");
  opt.flags.attach(cmp);

  CLI::App* sweep = app.add_subcommand("sweep", "synthetic load sweep");
  sweep->add_option("--levels", opt.levels, "comma-separated load multipliers");
  sweep->add_option("--seeds", opt.seeds, "snapshots per level");
  sweep->add_option("--base-users", opt.base_users, "users at level 1");
  sweep->add_option("--rats", opt.rats, "number of RATs");
  sweep->add_option("--seed", opt.seed, "base seed");
  sweep->add_option("--alpha", opt.alpha, "fairness degree (default 1)");
  sweep->add_option("--params", opt.params_path, "generator params JSON");
  sweep->add_option("--out", opt.out_path, "aggregate CSV path")->required();
  sweep->add_option("--raw-out", opt.raw_out, "optional per-scenario CSV");
  sweep->add_option("--primary-rat", opt.primary, "primary RAT for thresholds");
  sweep->add_option("--grid-points", opt.grid_points, "threshold grid resolution");
  opt.flags.attach(sweep);

  CLI::App* gen = app.add_subcommand("generate", "emit a synthetic scenario");
  gen->add_option("--seed", opt.seed, "seed");
  gen->add_option("--users", opt.users, "number of users");
  gen->add_option("--rats", opt.rats, "number of RATs");
  gen->add_option("--alpha", opt.alpha, "fairness degree");
  gen->add_option("--params", opt.params_path, "generator params JSON");
  gen->add_option("--out", opt.out_path, "scenario JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(solve)) return cmd_solve(opt);
    if (app.got_subcommand(dec)) return cmd_decentralized(opt);
    if (app.got_subcommand(cmp)) return cmd_compare(opt);
    if (app.got_subcommand(sweep)) return cmd_sweep(opt);
    if (app.got_subcommand(gen)) return cmd_generate(opt);
  } catch (const CliError& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", ratagg_status_name(e.status)}, {"message", e.message}};
    std::cerr << j.dump() << "\n";
    return exit_code_for(e.status);
  } catch (const fs::filesystem_error& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", "io_error"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", "internal"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  }
  return 0;
}
