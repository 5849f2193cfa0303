#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ratagg {

enum class Errc {
  invalid_argument,
  parse_error,
  io_error,
  zero_coverage_user,
  empty_rat,
  non_finite,
  negative_alpha,
  domain_error,
  zero_throughput,
  alpha_zero_unsupported,
  infeasible_tie_structure,
  negative_fraction,
  too_many_splitters,
  degenerate_instance,
  too_large,
  verify_mismatch,
  infeasible,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

/// Problem instance: per-user peak rates on every RAT plus the fairness degree.
/// A zero peak rate means the RAT does not cover that user.
struct Scenario {
  int num_users = 0;
  int num_rats = 0;
  std::vector<double> peak_rates;  // row-major, num_users x num_rats, Mb/s
  double alpha = 1.0;
  std::vector<std::string> user_labels;  // optional, empty or num_users entries
  std::vector<std::string> rat_labels;   // optional, empty or num_rats entries

  double rate(int u, int b) const {
    return peak_rates[static_cast<size_t>(u) * num_rats + b];
  }
  double& rate(int u, int b) {
    return peak_rates[static_cast<size_t>(u) * num_rats + b];
  }

  bool operator==(const Scenario&) const = default;
};

Scenario make_scenario(int num_users, int num_rats, double alpha);

/// Returns the scenario iff every invariant holds, otherwise throws:
/// each user reachable by at least one RAT, each RAT covering at least one
/// user, all rates finite and nonnegative, alpha finite and nonnegative.
Scenario validate_scenario(Scenario s);

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

/// Resource split: fractions[u][b] of RAT b's resources granted to user u,
/// with the resulting per-user throughputs.
struct Allocation {
  int num_users = 0;
  int num_rats = 0;
  std::vector<double> fractions;    // row-major
  std::vector<double> throughputs;  // per user

  double frac(int u, int b) const {
    return fractions[static_cast<size_t>(u) * num_rats + b];
  }
  double& frac(int u, int b) {
    return fractions[static_cast<size_t>(u) * num_rats + b];
  }
};

Allocation make_allocation(int num_users, int num_rats);
void recompute_throughputs(Allocation& a, const Scenario& s);

/// Throws unless the allocation is feasible for the scenario: fractions in
/// [0,1], per-RAT column sums equal to one (or zero for idle RATs when
/// require_full_columns is false), throughputs consistent, and no resources
/// granted where there is no coverage.
void check_feasible(const Allocation& a, const Scenario& s,
                    bool require_full_columns = true,
                    double column_tolerance = 1e-9);

/// Per-user best-RAT tie sets and the per-RAT user lists built from the
/// designated representative (lowest index in the tie set), so every user
/// is counted on exactly one RAT.
struct AssociationMap {
  std::vector<std::vector<int>> best_sets;  // per user, ascending RAT ids
  std::vector<std::vector<int>> rat_users;  // per RAT, ascending user ids
  double tie_tolerance = 1e-6;

  int representative(int u) const { return best_sets[u].front(); }
};

struct TraceRow {
  int iteration = 0;
  std::vector<double> lambdas;
  double objective = 0.0;
  double subgrad_norm = 0.0;
};

/// Load-indicator iterate of the subgradient solver plus best-so-far
/// bookkeeping and the trajectory statistics used by the divergence bound.
struct DualState {
  std::vector<double> lambdas;
  int iteration = 0;
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> best_lambdas;

  std::vector<double> initial_lambdas;
  double eps_sum = 0.0;
  double eps_sq_sum = 0.0;
  double max_subgrad_norm = 0.0;
  double last_movement = std::numeric_limits<double>::infinity();
  std::vector<TraceRow> trace;
};

struct SolveReport {
  Allocation allocation;
  double alpha = 1.0;
  double dual_objective = 0.0;
  double primal_utility = 0.0;
  double kkt_residual = 0.0;
  int splitter_count = 0;
  int iterations_used = 0;
  double duality_gap_bound = 0.0;
  std::optional<std::int64_t> message_count;
  std::vector<double> lambdas;
  bool refined = false;
  std::vector<TraceRow> trace;
};

}  // namespace ratagg
