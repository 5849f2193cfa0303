#pragma once

#include <vector>

#include "core/model.hpp"

namespace ratagg {

/// Greedy single-RAT association: each user joins the RAT that would give it
/// the best equal-share throughput given the current room counts, sweeping in
/// user order until a fixed point (capped). Resources are then shared equally
/// inside every RAT. Unused RATs stay idle.
Allocation greedy_association(const Scenario& s);

/// Threshold-based single-RAT association on peak-rate proxies: a user leaves
/// the primary RAT for its best alternative only when its primary rate is
/// below offload_threshold and the alternative rate is above
/// snr_proxy_threshold. Equal-share allocation per RAT.
Allocation threshold_association(const Scenario& s, int primary_rat,
                                 double snr_proxy_threshold,
                                 double offload_threshold);

struct ThresholdChoice {
  double snr_proxy_threshold = 0.0;
  double offload_threshold = 0.0;
  double mean_utility = 0.0;
};

/// Picks the grid point maximizing mean network utility over the scenario
/// set; ties go to the smallest thresholds in (snr, offload) order.
ThresholdChoice tune_thresholds(const std::vector<Scenario>& set, int primary_rat,
                                const std::vector<double>& snr_candidates,
                                const std::vector<double>& offload_candidates);

}  // namespace ratagg
