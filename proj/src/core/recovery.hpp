#pragma once

#include <map>
#include <vector>

#include "core/dual.hpp"
#include "core/model.hpp"

namespace ratagg {

/// Fills the optimal fractions c^(rho-1)/lambda^rho for every user whose tie
/// set is a single RAT; splitter rows are left at zero.
Allocation single_rat_fractions(const std::vector<double>& lambdas,
                                const Scenario& s, const AssociationMap& assoc);

/// Raw solution of the splitter equations: one unknown per (splitter, member
/// RAT) pair. The per-RAT leftover equations are enforced exactly (they are
/// primal feasibility); the per-splitter throughput-target equations are fit
/// in the least-squares sense on the remaining degrees of freedom.
struct SplitterSolve {
  std::vector<std::pair<int, int>> unknowns;  // (user, rat)
  std::vector<double> values;                 // before clamping
  double hard_residual = 0.0;
};

SplitterSolve solve_splitter_fractions(const std::vector<double>& lambdas,
                                       const Scenario& s,
                                       const AssociationMap& assoc,
                                       const Allocation& partial);

/// Completes the allocation by solving for the splitter fractions, clamping
/// round-off, normalizing every column and checking feasibility.
Allocation splitter_system(const std::vector<double>& lambdas, const Scenario& s,
                           const AssociationMap& assoc, const Allocation& partial);

/// Closed form for the two-RAT aggregation case: the splitter takes the
/// leftover share on each of its two RATs. Requires every tie set to have at
/// most two RATs and every RAT to host at most one splitter.
Allocation two_rat_closed_form(const std::vector<double>& lambdas,
                               const Scenario& s, const AssociationMap& assoc,
                               const Allocation& partial);

/// Sum-rate optimum: each RAT gives all resources to its highest-rate user,
/// lowest user index on ties.
Allocation alpha_zero_solution(const Scenario& s);

/// Max relative deviation of throughputs from the rate-indicator targets plus
/// the max column-sum deviation from one; zero at exact optimality.
double kkt_residual(const Allocation& a, const std::vector<double>& lambdas,
                    const Scenario& s, double alpha);

/// Number of users splitting across each distinct tie set of two or more RATs.
std::map<std::vector<int>, int> splitter_census(const AssociationMap& assoc);

int total_splitters(const AssociationMap& assoc);

}  // namespace ratagg
