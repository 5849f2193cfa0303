#include "core/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace ratagg {

namespace {

constexpr double kClampTolerance = 1e-7;
constexpr double kHardResidualTolerance = 1e-6;

std::vector<int> splitter_users(const AssociationMap& assoc) {
  std::vector<int> out;
  for (size_t u = 0; u < assoc.best_sets.size(); ++u)
    if (assoc.best_sets[u].size() >= 2) out.push_back(static_cast<int>(u));
  return out;
}

/// Throughput target per user: max over covered RATs of (c/lambda)^(1/alpha).
double rate_target(const std::vector<double>& lambdas, const Scenario& s, int u,
                   double rho) {
  double best = 0.0;
  for (int b = 0; b < s.num_rats; ++b) {
    const double c = s.rate(u, b);
    if (c > 0.0) best = std::max(best, c / lambdas[b]);
  }
  return std::pow(best, rho);
}

void clamp_fraction(double& f) {
  if (f < 0.0) {
    if (f < -kClampTolerance) {
      std::ostringstream os;
      os << "recovered fraction " << f << " is negative beyond the clamp tolerance";
      fail(Errc::negative_fraction, os.str());
    }
    f = 0.0;
  } else if (f > 1.0) {
    if (f > 1.0 + kClampTolerance) {
      std::ostringstream os;
      os << "recovered fraction " << f << " exceeds one beyond the clamp tolerance";
      fail(Errc::negative_fraction, os.str());
    }
    f = 1.0;
  }
}

/// Rescales every column to sum exactly to one and refreshes throughputs.
Allocation finish(Allocation a, const Scenario& s) {
  for (int b = 0; b < a.num_rats; ++b) {
    double col = 0.0;
    for (int u = 0; u < a.num_users; ++u) col += a.frac(u, b);
    if (!(col > 0.0))
      fail(Errc::infeasible_tie_structure,
           "RAT " + std::to_string(b) +
               " attracts no resources at the given load indicators");
    for (int u = 0; u < a.num_users; ++u) a.frac(u, b) /= col;
  }
  recompute_throughputs(a, s);
  check_feasible(a, s);
  return a;
}

}  // namespace

Allocation single_rat_fractions(const std::vector<double>& lambdas,
                                const Scenario& s, const AssociationMap& assoc) {
  const UtilityParams up(s.alpha);
  Allocation a = make_allocation(s.num_users, s.num_rats);
  for (int u = 0; u < s.num_users; ++u) {
    if (assoc.best_sets[u].size() != 1) continue;
    const int b = assoc.best_sets[u].front();
    const double denom = std::pow(lambdas[b], up.rho);
    a.frac(u, b) = rate_power_term(s.rate(u, b), up.rho) / denom;
  }
  recompute_throughputs(a, s);
  return a;
}

SplitterSolve solve_splitter_fractions(const std::vector<double>& lambdas,
                                       const Scenario& s,
                                       const AssociationMap& assoc,
                                       const Allocation& partial) {
  const UtilityParams up(s.alpha);
  const std::vector<int> splitters = splitter_users(assoc);
  SplitterSolve out;
  if (splitters.empty()) return out;

  // Unknowns: one fraction per (splitter, member RAT) pair.
  std::vector<std::pair<int, int>>& unknowns = out.unknowns;
  std::vector<int> hosting;  // RATs that host at least one splitter
  {
    std::vector<char> hosts(s.num_rats, 0);
    for (int u : splitters)
      for (int b : assoc.best_sets[u]) {
        unknowns.emplace_back(u, b);
        hosts[b] = 1;
      }
    for (int b = 0; b < s.num_rats; ++b)
      if (hosts[b]) hosting.push_back(b);
  }
  const int n = static_cast<int>(unknowns.size());

  // Hard rows: on every hosting RAT the splitters take exactly the leftover
  // after the single-RAT users.
  Eigen::MatrixXd hard = Eigen::MatrixXd::Zero(hosting.size(), n);
  Eigen::VectorXd hard_rhs(hosting.size());
  for (size_t row = 0; row < hosting.size(); ++row) {
    const int b = hosting[row];
    double singles = 0.0;
    for (int u = 0; u < s.num_users; ++u) singles += partial.frac(u, b);
    hard_rhs(row) = 1.0 - singles;
    for (int k = 0; k < n; ++k)
      if (unknowns[k].second == b) hard(row, k) = 1.0;
  }

  // Soft rows: each splitter's aggregate rate should meet its indicator
  // target; scaled by the target so residuals are relative.
  Eigen::MatrixXd soft = Eigen::MatrixXd::Zero(splitters.size(), n);
  Eigen::VectorXd soft_rhs(splitters.size());
  for (size_t row = 0; row < splitters.size(); ++row) {
    const int u = splitters[row];
    const double target = rate_target(lambdas, s, u, up.rho);
    soft_rhs(row) = 1.0;
    for (int k = 0; k < n; ++k)
      if (unknowns[k].first == u)
        soft(row, k) = s.rate(u, unknowns[k].second) / target;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(hard);
  lu.setThreshold(1e-10);
  Eigen::VectorXd x = lu.solve(hard_rhs);
  if (!x.allFinite()) {
    out.hard_residual = std::numeric_limits<double>::infinity();
    out.values.assign(n, 0.0);
    return out;
  }
  out.hard_residual = (hard * x - hard_rhs).lpNorm<Eigen::Infinity>();
  const Eigen::MatrixXd kernel = lu.kernel();
  if (lu.dimensionOfKernel() > 0) {
    const Eigen::MatrixXd soft_k = soft * kernel;
    const Eigen::VectorXd rhs = soft_rhs - soft * x;
    const Eigen::VectorXd z =
        soft_k.completeOrthogonalDecomposition().solve(rhs);
    x += kernel * z;
  }
  out.values.assign(x.data(), x.data() + n);
  return out;
}

Allocation splitter_system(const std::vector<double>& lambdas, const Scenario& s,
                           const AssociationMap& assoc, const Allocation& partial) {
  Allocation a = partial;
  const SplitterSolve solve = solve_splitter_fractions(lambdas, s, assoc, partial);
  if (solve.unknowns.empty()) return finish(std::move(a), s);
  if (solve.hard_residual > kHardResidualTolerance) {
    std::ostringstream os;
    os << "splitter system is inconsistent (residual " << solve.hard_residual
       << "); the tie structure is cyclic or the tie tolerance is mis-set, "
          "try a tighter tie tolerance";
    fail(Errc::infeasible_tie_structure, os.str());
  }
  for (size_t k = 0; k < solve.unknowns.size(); ++k) {
    double f = solve.values[k];
    clamp_fraction(f);
    a.frac(solve.unknowns[k].first, solve.unknowns[k].second) = f;
  }
  return finish(std::move(a), s);
}

Allocation two_rat_closed_form(const std::vector<double>& lambdas,
                               const Scenario& s, const AssociationMap& assoc,
                               const Allocation& partial) {
  (void)lambdas;
  Allocation a = partial;
  const std::vector<int> splitters = splitter_users(assoc);
  if (splitters.empty()) return finish(std::move(a), s);

  std::vector<int> host_of(s.num_rats, -1);
  for (int u : splitters) {
    const auto& ties = assoc.best_sets[u];
    if (ties.size() != 2) {
      std::ostringstream os;
      os << "user " << u << " ties " << ties.size()
         << " RATs; the closed form covers two-RAT aggregation only";
      fail(Errc::too_many_splitters, os.str());
    }
    for (int b : ties) {
      if (host_of[b] >= 0) {
        std::ostringstream os;
        os << "users " << host_of[b] << " and " << u << " both split on RAT "
           << b << "; at most one splitter per RAT pair is supported";
        fail(Errc::too_many_splitters, os.str());
      }
      host_of[b] = u;
    }
  }

  for (int u : splitters) {
    for (int b : assoc.best_sets[u]) {
      double singles = 0.0;
      for (int v = 0; v < s.num_users; ++v) singles += partial.frac(v, b);
      double f = 1.0 - singles;
      clamp_fraction(f);
      a.frac(u, b) = f;
    }
  }
  return finish(std::move(a), s);
}

Allocation alpha_zero_solution(const Scenario& s) {
  Allocation a = make_allocation(s.num_users, s.num_rats);
  for (int b = 0; b < s.num_rats; ++b) {
    int winner = 0;
    double best = -1.0;
    for (int u = 0; u < s.num_users; ++u) {
      if (s.rate(u, b) > best) {
        best = s.rate(u, b);
        winner = u;
      }
    }
    a.frac(winner, b) = 1.0;
  }
  recompute_throughputs(a, s);
  check_feasible(a, s);
  return a;
}

double kkt_residual(const Allocation& a, const std::vector<double>& lambdas,
                    const Scenario& s, double alpha) {
  const UtilityParams up(alpha);
  double rate_dev = 0.0;
  for (int u = 0; u < s.num_users; ++u) {
    const double target = rate_target(lambdas, s, u, up.rho);
    rate_dev = std::max(rate_dev, std::abs(a.throughputs[u] - target) / target);
  }
  double col_dev = 0.0;
  for (int b = 0; b < s.num_rats; ++b) {
    double col = 0.0;
    for (int u = 0; u < s.num_users; ++u) col += a.frac(u, b);
    col_dev = std::max(col_dev, std::abs(col - 1.0));
  }
  return rate_dev + col_dev;
}

std::map<std::vector<int>, int> splitter_census(const AssociationMap& assoc) {
  std::map<std::vector<int>, int> census;
  for (const auto& ties : assoc.best_sets)
    if (ties.size() >= 2) ++census[ties];
  return census;
}

int total_splitters(const AssociationMap& assoc) {
  int n = 0;
  for (const auto& ties : assoc.best_sets)
    if (ties.size() >= 2) ++n;
  return n;
}

}  // namespace ratagg
