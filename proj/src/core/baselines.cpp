#include "core/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/utility.hpp"

namespace ratagg {

namespace {

constexpr int kMaxPasses = 100;

Allocation equal_share(const Scenario& s, const std::vector<int>& assigned_rat) {
  Allocation a = make_allocation(s.num_users, s.num_rats);
  std::vector<int> counts(s.num_rats, 0);
  for (int u = 0; u < s.num_users; ++u) {
    const int b = assigned_rat[u];
    if (b >= 0 && s.rate(u, b) > 0.0) ++counts[b];
  }
  for (int u = 0; u < s.num_users; ++u) {
    const int b = assigned_rat[u];
    if (b >= 0 && s.rate(u, b) > 0.0) a.frac(u, b) = 1.0 / counts[b];
  }
  recompute_throughputs(a, s);
  check_feasible(a, s, /*require_full_columns=*/false);
  return a;
}

}  // namespace

Allocation greedy_association(const Scenario& s) {
  std::vector<int> assigned(s.num_users, -1);
  std::vector<int> counts(s.num_rats, 0);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool changed = false;
    for (int u = 0; u < s.num_users; ++u) {
      int best = -1;
      double best_rate = -1.0;
      for (int b = 0; b < s.num_rats; ++b) {
        const double c = s.rate(u, b);
        if (c <= 0.0) continue;
        // Expected share if u moved to b, counting itself.
        const int room = counts[b] - (assigned[u] == b ? 1 : 0) + 1;
        const double rate = c / room;
        if (rate > best_rate) {
          best_rate = rate;
          best = b;
        }
      }
      if (best != assigned[u]) {
        if (assigned[u] >= 0) --counts[assigned[u]];
        ++counts[best];
        assigned[u] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return equal_share(s, assigned);
}

Allocation threshold_association(const Scenario& s, int primary_rat,
                                 double snr_proxy_threshold,
                                 double offload_threshold) {
  if (primary_rat < 0 || primary_rat >= s.num_rats)
    fail(Errc::invalid_argument, "primary RAT index out of range");
  if (snr_proxy_threshold < 0.0 || offload_threshold < 0.0)
    fail(Errc::invalid_argument, "thresholds must be nonnegative");
  std::vector<int> assigned(s.num_users, primary_rat);
  for (int u = 0; u < s.num_users; ++u) {
    int best_other = -1;
    double best_rate = 0.0;
    for (int b = 0; b < s.num_rats; ++b) {
      if (b == primary_rat) continue;
      if (s.rate(u, b) > best_rate) {
        best_rate = s.rate(u, b);
        best_other = b;
      }
    }
    if (best_other >= 0 && s.rate(u, primary_rat) < offload_threshold &&
        best_rate > snr_proxy_threshold)
      assigned[u] = best_other;
  }
  return equal_share(s, assigned);
}

ThresholdChoice tune_thresholds(const std::vector<Scenario>& set, int primary_rat,
                                const std::vector<double>& snr_candidates,
                                const std::vector<double>& offload_candidates) {
  if (set.empty() || snr_candidates.empty() || offload_candidates.empty())
    fail(Errc::invalid_argument, "tuning needs scenarios and a nonempty grid");
  ThresholdChoice best;
  best.mean_utility = -std::numeric_limits<double>::infinity();
  bool first = true;
  std::vector<double> snr = snr_candidates;
  std::vector<double> off = offload_candidates;
  std::sort(snr.begin(), snr.end());
  std::sort(off.begin(), off.end());
  for (double s_thr : snr) {
    for (double o_thr : off) {
      double total = 0.0;
      for (const Scenario& sc : set)
        total += network_utility(threshold_association(sc, primary_rat, s_thr, o_thr),
                                 sc.alpha);
      const double mean = total / set.size();
      if (first || mean > best.mean_utility) {
        best = {s_thr, o_thr, mean};
        first = false;
      }
    }
  }
  return best;
}

}  // namespace ratagg
