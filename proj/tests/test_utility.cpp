#include <algorithm>
#include <cmath>

#include "core/utility.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ratagg;

TEST_CASE("utility values at the reference points") {
  CHECK(f_alpha(std::exp(1.0), 1.0) == doctest::Approx(1.0));
  CHECK(f_alpha(5.0, 0.0) == doctest::Approx(5.0));
  CHECK(f_alpha(4.0, 2.0) == doctest::Approx(-0.25));
}

TEST_CASE("utility domain errors") {
  CHECK_THROWS_AS(f_alpha(0.0, 1.0), Error);
  CHECK_THROWS_AS(f_alpha(-1.0, 0.5), Error);
  CHECK(f_alpha(0.0, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("utility is strictly increasing and concave") {
  testutil::Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const double alpha = rng.uniform(0.0, 3.0);
    double x = rng.uniform(0.01, 50.0);
    double y = rng.uniform(0.01, 50.0);
    if (x == y) continue;
    if (x > y) std::swap(x, y);
    CHECK(f_alpha(x, alpha) < f_alpha(y, alpha));
    const double mid = f_alpha(0.5 * (x + y), alpha);
    CHECK(mid >= 0.5 * (f_alpha(x, alpha) + f_alpha(y, alpha)) - 1e-12);
  }
}

TEST_CASE("network utility on known rate vectors") {
  Scenario s = make_scenario(2, 1, 1.0);
  s.rate(0, 0) = 2.0 * std::exp(1.0);
  s.rate(1, 0) = 2.0 * std::exp(1.0);
  Allocation a = make_allocation(2, 1);
  a.frac(0, 0) = 0.5;
  a.frac(1, 0) = 0.5;
  recompute_throughputs(a, s);
  CHECK(network_utility(a, 1.0) == doctest::Approx(2.0));

  a.throughputs = {10.0, 8.0};
  CHECK(network_utility(a, 0.0) == doctest::Approx(18.0));
  CHECK(network_utility(a, 1.0) ==
        doctest::Approx(std::log(10.0) + std::log(8.0)));
}

TEST_CASE("zero throughput under alpha >= 1 maps to negative infinity") {
  Allocation a = make_allocation(2, 1);
  a.throughputs = {10.0, 0.0};
  CHECK(network_utility(a, 1.0) == -std::numeric_limits<double>::infinity());
  CHECK(network_utility(a, 2.0) == -std::numeric_limits<double>::infinity());
  CHECK(network_utility(a, 0.5) == doctest::Approx(2.0 * std::sqrt(10.0)));
  CHECK(network_utility(a, 1.0) < -1e300);
}

TEST_CASE("ordering around alpha = 1 is continuous on a candidate set") {
  Scenario s = testutil::random_instance(11, 3, 2, 1.0, 0.0);
  testutil::Rng rng(12);
  std::vector<Allocation> candidates;
  for (int k = 0; k < 20; ++k)
    candidates.push_back(testutil::random_feasible(rng, s));
  auto argmax_at = [&](double alpha) {
    int best = 0;
    for (size_t k = 1; k < candidates.size(); ++k)
      if (network_utility(candidates[k], alpha) >
          network_utility(candidates[best], alpha))
        best = int(k);
    return best;
  };
  const int at_one = argmax_at(1.0);
  CHECK(argmax_at(1.0 - 1e-6) == at_one);
  CHECK(argmax_at(1.0 + 1e-6) == at_one);
}

TEST_CASE("split ratios route flow in proportion to per-RAT rate") {
  Scenario s = make_scenario(1, 2, 1.0);
  s.rate(0, 0) = 10.0;
  s.rate(0, 1) = 5.0;
  Allocation a = make_allocation(1, 2);
  a.frac(0, 0) = 1.0;
  recompute_throughputs(a, s);
  auto r = split_ratios(a, s, 0);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(0.0));

  s.rate(0, 1) = 10.0;
  a.frac(0, 0) = 0.5;
  a.frac(0, 1) = 0.5;
  recompute_throughputs(a, s);
  r = split_ratios(a, s, 0);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.5));

  s.rate(0, 0) = 10.0;
  s.rate(0, 1) = 4.0;
  a.frac(0, 0) = 0.2;
  a.frac(0, 1) = 0.5;
  recompute_throughputs(a, s);
  r = split_ratios(a, s, 0);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.5));
}

TEST_CASE("split ratios sum to one for random feasible allocations") {
  testutil::Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    Scenario s = testutil::random_instance(100 + trial, 2 + rng.index(6),
                                           1 + rng.index(4), 1.0);
    Allocation a = testutil::random_feasible(rng, s);
    for (int u = 0; u < s.num_users; ++u) {
      if (a.throughputs[u] <= 0.0) continue;
      const auto r = split_ratios(a, s, u);
      double sum = 0.0;
      for (double v : r) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("split ratios reject a starved user") {
  Scenario s = make_scenario(2, 1, 1.0);
  s.rate(0, 0) = 5.0;
  s.rate(1, 0) = 5.0;
  Allocation a = make_allocation(2, 1);
  a.frac(0, 0) = 1.0;
  recompute_throughputs(a, s);
  CHECK_THROWS_AS(split_ratios(a, s, 1), Error);
}
