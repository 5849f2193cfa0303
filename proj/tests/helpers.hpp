#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "core/model.hpp"

namespace testutil {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return double(gen() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return int(gen() % std::uint64_t(n)); }
};

/// Random valid instance with occasional coverage holes; every row and column
/// is guaranteed a positive entry.
inline ratagg::Scenario random_instance(std::uint64_t seed, int users, int rats,
                                        double alpha, double zero_prob = 0.15) {
  Rng rng(seed);
  ratagg::Scenario s = ratagg::make_scenario(users, rats, alpha);
  for (int u = 0; u < users; ++u)
    for (int b = 0; b < rats; ++b)
      s.rate(u, b) = (rng.uniform() < zero_prob) ? 0.0 : rng.uniform(1.0, 10.0);
  for (int u = 0; u < users; ++u) {
    bool any = false;
    for (int b = 0; b < rats; ++b) any = any || s.rate(u, b) > 0.0;
    if (!any) s.rate(u, rng.index(rats)) = rng.uniform(1.0, 10.0);
  }
  for (int b = 0; b < rats; ++b) {
    bool any = false;
    for (int u = 0; u < users; ++u) any = any || s.rate(u, b) > 0.0;
    if (!any) s.rate(rng.index(users), b) = rng.uniform(1.0, 10.0);
  }
  return ratagg::validate_scenario(std::move(s));
}

/// Random feasible allocation: every column is a random point on the simplex
/// over the covered users.
inline ratagg::Allocation random_feasible(Rng& rng, const ratagg::Scenario& s) {
  ratagg::Allocation a = ratagg::make_allocation(s.num_users, s.num_rats);
  for (int b = 0; b < s.num_rats; ++b) {
    double total = 0.0;
    std::vector<double> draws(s.num_users, 0.0);
    for (int u = 0; u < s.num_users; ++u) {
      if (s.rate(u, b) > 0.0) {
        draws[u] = -std::log(rng.uniform() + 1e-18);
        total += draws[u];
      }
    }
    for (int u = 0; u < s.num_users; ++u) a.frac(u, b) = draws[u] / total;
  }
  ratagg::recompute_throughputs(a, s);
  return a;
}

inline bool feasible(const ratagg::Allocation& a, const ratagg::Scenario& s,
                     bool require_full_columns = true) {
  try {
    ratagg::check_feasible(a, s, require_full_columns);
    return true;
  } catch (const ratagg::Error&) {
    return false;
  }
}

}  // namespace testutil
