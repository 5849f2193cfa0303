#pragma once

#include <vector>

#include "core/model.hpp"

namespace ratagg {

/// Fairness parameters shared by the dual-side machinery. rho = 1/alpha,
/// which is why the alpha = 0 special case never takes this path.
struct UtilityParams {
  double alpha;
  double rho;

  explicit UtilityParams(double a);
};

/// Parameterized utility: log(x) at alpha = 1, x^(1-alpha)/(1-alpha) otherwise.
/// Strictly increasing and concave for alpha >= 0.
double f_alpha(double x, double alpha);

/// Sum of per-user utilities. Returns -infinity when some user has zero
/// throughput under alpha >= 1 so that starving policies always lose
/// comparisons.
double network_utility(const Allocation& a, double alpha);

/// Fraction of user u's flow routed via each RAT: frac*rate / throughput.
std::vector<double> split_ratios(const Allocation& a, const Scenario& s, int u);

}  // namespace ratagg
