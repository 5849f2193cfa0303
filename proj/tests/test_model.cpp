#include <cmath>

#include "core/model.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ratagg;

TEST_CASE("minimal valid instance is accepted") {
  Scenario s = make_scenario(1, 1, 1.0);
  s.rate(0, 0) = 10.0;
  CHECK_NOTHROW(validate_scenario(s));
}

TEST_CASE("all-zero row is rejected") {
  Scenario s = make_scenario(2, 2, 1.0);
  s.rate(1, 0) = 4.0;
  s.rate(1, 1) = 8.0;
  try {
    validate_scenario(s);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_coverage_user);
    CHECK(std::string(e.what()).find("user 0") != std::string::npos);
  }
}

TEST_CASE("all-zero column is rejected") {
  Scenario s = make_scenario(2, 2, 1.0);
  s.rate(0, 0) = 10.0;
  s.rate(1, 0) = 4.0;
  try {
    validate_scenario(s);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_rat);
    CHECK(std::string(e.what()).find("RAT 1") != std::string::npos);
  }
}

TEST_CASE("non-finite entries and negative alpha are rejected") {
  Scenario s = make_scenario(1, 1, 1.0);
  s.rate(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_scenario(s), Error);

  s.rate(0, 0) = 10.0;
  s.alpha = -0.5;
  try {
    validate_scenario(s);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::negative_alpha);
  }
}

TEST_CASE("scenario JSON round-trip is the identity") {
  for (int trial = 0; trial < 25; ++trial) {
    testutil::Rng rng(500 + trial);
    Scenario s = testutil::random_instance(600 + trial, 1 + rng.index(8),
                                           1 + rng.index(4), rng.uniform(0, 3));
    if (trial % 2 == 0) {
      for (int u = 0; u < s.num_users; ++u)
        s.user_labels.push_back("ue" + std::to_string(u));
      for (int b = 0; b < s.num_rats; ++b)
        s.rat_labels.push_back("rat" + std::to_string(b));
    }
    const Scenario parsed = scenario_from_json(scenario_to_json(s));
    CHECK(parsed == s);
  }
}

TEST_CASE("scenario JSON parsing rejects malformed input") {
  CHECK_THROWS_AS(scenario_from_json("not json"), Error);
  CHECK_THROWS_AS(scenario_from_json("{}"), Error);
  CHECK_THROWS_AS(scenario_from_json(R"({"alpha":1,"peak_rates":[[1],[1,2]]})"),
                  Error);
  CHECK_THROWS_AS(scenario_from_json(R"({"alpha":1,"peak_rates":[]})"), Error);
}

TEST_CASE("feasibility checker accepts and rejects as specified") {
  Scenario s = testutil::random_instance(42, 4, 2, 1.0, 0.0);
  testutil::Rng rng(43);
  Allocation a = testutil::random_feasible(rng, s);
  CHECK(testutil::feasible(a, s));

  SUBCASE("column sum off by more than the tolerance") {
    a.frac(0, 0) += 1e-6;
    CHECK_FALSE(testutil::feasible(a, s));
  }
  SUBCASE("resources on an uncovered pair") {
    Scenario holes = testutil::random_instance(44, 4, 2, 1.0, 0.0);
    holes.rate(0, 0) = 0.0;
    holes = validate_scenario(holes);
    Allocation b = testutil::random_feasible(rng, holes);
    CHECK(testutil::feasible(b, holes));
    b.frac(0, 0) = b.frac(1, 0);
    CHECK_FALSE(testutil::feasible(b, holes));
  }
  SUBCASE("stale throughputs") {
    a.throughputs[0] += 1.0;
    CHECK_FALSE(testutil::feasible(a, s));
  }
  SUBCASE("idle columns only pass in the relaxed mode") {
    Allocation idle = make_allocation(s.num_users, s.num_rats);
    for (int u = 0; u < s.num_users; ++u) idle.frac(u, 0) = 1.0 / s.num_users;
    recompute_throughputs(idle, s);
    CHECK_FALSE(testutil::feasible(idle, s));
    CHECK(testutil::feasible(idle, s, false));
  }
}
