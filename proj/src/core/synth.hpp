#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace ratagg {

/// Geometric path-loss generator: one wide-coverage anchor RAT at the center
/// of a square area plus small-coverage RATs on a fixed grid, users placed
/// uniformly at random. Peak rates are Shannon capacities in Mb/s.
struct GeneratorParams {
  double area_m = 50.0;
  double pathloss_exp = 3.0;
  double noise_dbm_hz = -174.0;
  double ref_loss_db = 40.0;     // path loss at the 1 m reference distance
  double min_distance_m = 1.0;   // distance floor
  double alpha = 1.0;
  std::vector<double> bandwidths_hz;       // per RAT
  std::vector<double> tx_powers_dbm;       // per RAT
  std::vector<double> coverage_radius_m;   // per RAT
};

GeneratorParams default_params(int num_rats);
GeneratorParams params_from_json(const std::string& text, int num_rats);
std::string params_to_json(const GeneratorParams& p);

/// Deterministic for a fixed seed. Instances failing validation are retried
/// with an incremented sub-seed, up to 100 attempts.
Scenario generate(std::uint64_t seed, int num_users, int num_rats,
                  const GeneratorParams& params);

/// Rate a user at the given distance would see from the given RAT; used by
/// generate() and exposed for calibration tests.
double shannon_rate_mbps(const GeneratorParams& p, int rat, double distance_m);

/// Per utilization level, a set of seeded snapshots whose user count scales
/// with the level.
std::vector<std::vector<Scenario>> load_sweep(const GeneratorParams& params,
                                              int base_users, int num_rats,
                                              const std::vector<double>& levels,
                                              int seeds_per_level,
                                              std::uint64_t seed);

}  // namespace ratagg
