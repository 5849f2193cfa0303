#pragma once

#include <cmath>
#include <vector>

#include "core/model.hpp"
#include "core/utility.hpp"

namespace ratagg {

enum class StepSchedule { kConstant, kHarmonic, kSqrt };

struct SolverConfig {
  int max_iterations = 10000;
  StepSchedule step_schedule = StepSchedule::kSqrt;
  double epsilon0 = 1.0;
  std::vector<double> initial_lambda;  // empty: scale-based default; size 1: broadcast
  double tie_tolerance = 1e-6;
  double stop_tolerance = 1e-8;
  double lambda_floor = 1e-12;
  bool refine = true;  // structure refinement after the subgradient phase
  bool record_trace = false;
};

/// Step size at the 1-based iteration index.
double step_size(const SolverConfig& cfg, int iteration);

/// Default starting point: U/B users' worth of load per RAT at alpha = 1, and
/// the same count scaled by the column's mean positive rate otherwise, so the
/// start sits near the stationary point of the uniformly spread association.
std::vector<double> default_initial_lambdas(const Scenario& s);

/// Per-user load contribution, split to match the decentralized exchange:
/// the user-side factor depends only on its own peak rate, the RAT side
/// divides by its own load indicator.
inline double rate_power_term(double rate, double rho) {
  return std::pow(rate, rho - 1.0);
}

struct RatUpdate {
  double new_lambda = 0.0;
  double load_sum = 0.0;  // sum of c^(rho-1)/lambda^rho over reporting users
};

/// One RAT's local update: reads only its own load indicator, the terms
/// reported to it, and the shared step size.
inline RatUpdate rat_update(double lambda, const std::vector<double>& cterms,
                            double eps, double rho, double lambda_floor) {
  const double denom = std::pow(lambda, rho);
  double sum = 0.0;
  for (double t : cterms) sum += t / denom;
  double next = lambda + eps * (sum - 1.0);
  if (next < lambda_floor) next = lambda_floor;
  return {next, sum};
}

/// Tie set of RATs whose congestion-adjusted rate indicator is within
/// tie_tolerance (relative) of the user's best; RATs without coverage are
/// never included. Ascending order, so front() is the representative.
std::vector<int> user_tie_set(const std::vector<double>& lambdas,
                              const Scenario& s, int u, double tie_tolerance);

AssociationMap associate(const std::vector<double>& lambdas, const Scenario& s,
                         double tie_tolerance);

/// Dual objective at the given load indicators, association taken at the
/// exact argmax. Requires alpha > 0.
double dual_objective(const std::vector<double>& lambdas, const Scenario& s);

/// Gradient of the active smooth piece of the dual objective, one entry per RAT.
std::vector<double> subgradient(const std::vector<double>& lambdas,
                                const Scenario& s, const AssociationMap& assoc);

DualState init_dual_state(const Scenario& s, const SolverConfig& cfg);

/// One subgradient iteration: associate, update every load indicator with the
/// shared step, clamp at the floor, refresh the best-so-far objective.
void step(DualState& state, const SolverConfig& cfg, const Scenario& s);

/// Runs steps until max_iterations or until the load indicators move less
/// than stop_tolerance in the sup norm.
DualState solve_dual(const Scenario& s, const SolverConfig& cfg);

/// Divergence bound for the best objective seen over the trajectory:
/// (|lambda_1 - lambda*|^2 + G^2 sum eps_i^2) / (2 sum eps_i).
double prop1_bound(double eps_sum, double eps_sq_sum,
                   const std::vector<double>& initial_lambdas,
                   const std::vector<double>& reference_lambdas, double G);

}  // namespace ratagg
