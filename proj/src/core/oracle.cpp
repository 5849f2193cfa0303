#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "core/utility.hpp"

namespace ratagg {

std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  int pivot = 0;
  for (size_t j = 0; j < sorted.size(); ++j) {
    running += sorted[j];
    const double candidate = (running - 1.0) / double(j + 1);
    if (sorted[j] - candidate > 0.0) {
      theta = candidate;
      pivot = static_cast<int>(j + 1);
    }
  }
  (void)pivot;
  for (double& x : v) x = std::max(x - theta, 0.0);
  return v;
}

namespace {

/// Projects one RAT column onto the simplex over the covered users only.
void project_column(Allocation& a, const Scenario& s, int b) {
  std::vector<int> support;
  std::vector<double> vals;
  for (int u = 0; u < s.num_users; ++u) {
    if (s.rate(u, b) > 0.0) {
      support.push_back(u);
      vals.push_back(a.frac(u, b));
    } else {
      a.frac(u, b) = 0.0;
    }
  }
  vals = project_to_simplex(std::move(vals));
  for (size_t k = 0; k < support.size(); ++k) a.frac(support[k], b) = vals[k];
}

double utility_of(const Allocation& a, const Scenario& s) {
  return network_utility(a, s.alpha);
}

}  // namespace

Allocation primal_projected_gradient(const Scenario& s, int max_iters,
                                     double step0) {
  Allocation a = make_allocation(s.num_users, s.num_rats);
  std::vector<int> support_count(s.num_rats, 0);
  for (int b = 0; b < s.num_rats; ++b)
    for (int u = 0; u < s.num_users; ++u)
      if (s.rate(u, b) > 0.0) ++support_count[b];
  for (int b = 0; b < s.num_rats; ++b)
    for (int u = 0; u < s.num_users; ++u)
      if (s.rate(u, b) > 0.0) a.frac(u, b) = 1.0 / support_count[b];
  recompute_throughputs(a, s);

  double step = step0;
  if (step <= 0.0) {
    // 1e-2 over a curvature estimate at the uniform start.
    double lipschitz = 1.0;
    for (int u = 0; u < s.num_users; ++u) {
      double cmax = 0.0;
      for (int b = 0; b < s.num_rats; ++b) cmax = std::max(cmax, s.rate(u, b));
      const double r = std::max(a.throughputs[u], 1e-12);
      lipschitz = std::max(lipschitz,
                           std::max(s.alpha, 1e-3) * cmax * cmax *
                               std::pow(r, -s.alpha - 1.0));
    }
    step = 1e-2 / lipschitz * s.num_users;
  }

  Allocation best = a;
  double best_utility = utility_of(a, s);
  double current_utility = best_utility;
  int stalled = 0;

  std::vector<double> grad(a.fractions.size(), 0.0);
  for (int it = 0; it < max_iters; ++it) {
    for (int u = 0; u < s.num_users; ++u) {
      const double r = a.throughputs[u];
      const double marginal =
          (s.alpha == 0.0) ? 1.0 : std::pow(std::max(r, 1e-300), -s.alpha);
      for (int b = 0; b < s.num_rats; ++b)
        grad[static_cast<size_t>(u) * s.num_rats + b] = marginal * s.rate(u, b);
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Allocation cand = a;
      for (size_t k = 0; k < cand.fractions.size(); ++k)
        cand.fractions[k] += step * grad[k];
      for (int b = 0; b < s.num_rats; ++b) project_column(cand, s, b);
      recompute_throughputs(cand, s);
      const double cand_utility = utility_of(cand, s);
      if (cand_utility >= current_utility) {
        a = std::move(cand);
        current_utility = cand_utility;
        accepted = true;
        step *= 1.25;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;

    if (current_utility > best_utility + 1e-13 * (1.0 + std::abs(best_utility))) {
      best_utility = current_utility;
      best = a;
      stalled = 0;
    } else if (++stalled > 500) {
      break;
    }
  }
  check_feasible(best, s);
  return best;
}

Allocation exhaustive_grid(const Scenario& s, int resolution) {
  if (s.num_users * s.num_rats > 6)
    fail(Errc::too_large, "grid search is limited to num_users*num_rats <= 6");
  if (resolution < 10)
    fail(Errc::invalid_argument, "grid resolution must be at least 10");

  // Per column, every composition of `resolution` ticks over covered users.
  std::vector<std::vector<int>> supports(s.num_rats);
  for (int b = 0; b < s.num_rats; ++b)
    for (int u = 0; u < s.num_users; ++u)
      if (s.rate(u, b) > 0.0) supports[b].push_back(u);

  Allocation current = make_allocation(s.num_users, s.num_rats);
  Allocation best = current;
  double best_utility = -std::numeric_limits<double>::infinity();
  bool found = false;

  std::function<void(int)> sweep_column = [&](int b) {
    if (b == s.num_rats) {
      recompute_throughputs(current, s);
      const double utility = network_utility(current, s.alpha);
      if (!found || utility > best_utility) {
        best_utility = utility;
        best = current;
        found = true;
      }
      return;
    }
    const auto& support = supports[b];
    std::function<void(size_t, int)> compose = [&](size_t idx, int left) {
      if (idx + 1 == support.size()) {
        current.frac(support[idx], b) = double(left) / resolution;
        sweep_column(b + 1);
        return;
      }
      for (int take = 0; take <= left; ++take) {
        current.frac(support[idx], b) = double(take) / resolution;
        compose(idx + 1, left - take);
      }
    };
    compose(0, resolution);
  };
  sweep_column(0);

  recompute_throughputs(best, s);
  check_feasible(best, s, /*require_full_columns=*/true, 1e-6);
  return best;
}

}  // namespace ratagg
