#include "core/model.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace ratagg {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::zero_coverage_user: return "ZeroCoverageUser";
    case Errc::empty_rat: return "EmptyRat";
    case Errc::non_finite: return "NonFinite";
    case Errc::negative_alpha: return "NegativeAlpha";
    case Errc::domain_error: return "DomainError";
    case Errc::zero_throughput: return "ZeroThroughput";
    case Errc::alpha_zero_unsupported: return "AlphaZeroUnsupported";
    case Errc::infeasible_tie_structure: return "InfeasibleTieStructure";
    case Errc::negative_fraction: return "NegativeFraction";
    case Errc::too_many_splitters: return "TooManySplitters";
    case Errc::degenerate_instance: return "DegenerateInstance";
    case Errc::too_large: return "TooLarge";
    case Errc::verify_mismatch: return "VerifyMismatch";
    case Errc::infeasible: return "Infeasible";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

Scenario make_scenario(int num_users, int num_rats, double alpha) {
  Scenario s;
  s.num_users = num_users;
  s.num_rats = num_rats;
  s.alpha = alpha;
  s.peak_rates.assign(static_cast<size_t>(num_users) * num_rats, 0.0);
  return s;
}

Scenario validate_scenario(Scenario s) {
  if (s.num_users < 1 || s.num_rats < 1)
    fail(Errc::invalid_argument, "scenario needs at least one user and one RAT");
  if (s.peak_rates.size() !=
      static_cast<size_t>(s.num_users) * static_cast<size_t>(s.num_rats))
    fail(Errc::invalid_argument, "peak rate matrix size does not match dimensions");
  if (!std::isfinite(s.alpha)) fail(Errc::non_finite, "alpha is not finite");
  if (s.alpha < 0.0) fail(Errc::negative_alpha, "alpha must be nonnegative");
  if (!s.user_labels.empty() &&
      s.user_labels.size() != static_cast<size_t>(s.num_users))
    fail(Errc::invalid_argument, "user label count does not match num_users");
  if (!s.rat_labels.empty() &&
      s.rat_labels.size() != static_cast<size_t>(s.num_rats))
    fail(Errc::invalid_argument, "rat label count does not match num_rats");

  for (double v : s.peak_rates) {
    if (!std::isfinite(v)) fail(Errc::non_finite, "peak rate is not finite");
    if (v < 0.0) fail(Errc::invalid_argument, "peak rate is negative");
  }
  for (int u = 0; u < s.num_users; ++u) {
    bool covered = false;
    for (int b = 0; b < s.num_rats; ++b) covered = covered || s.rate(u, b) > 0.0;
    if (!covered)
      fail(Errc::zero_coverage_user,
           "user " + std::to_string(u) + " has no positive peak rate");
  }
  for (int b = 0; b < s.num_rats; ++b) {
    bool used = false;
    for (int u = 0; u < s.num_users; ++u) used = used || s.rate(u, b) > 0.0;
    if (!used)
      fail(Errc::empty_rat, "RAT " + std::to_string(b) + " covers no user");
  }
  return s;
}

Scenario scenario_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("scenario JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("alpha") || !j.contains("peak_rates"))
      fail(Errc::parse_error, "scenario JSON needs 'alpha' and 'peak_rates'");
    Scenario s;
    s.alpha = j.at("alpha").get<double>();
    const auto& rows = j.at("peak_rates");
    if (!rows.is_array() || rows.empty())
      fail(Errc::parse_error, "'peak_rates' must be a non-empty array of rows");
    s.num_users = static_cast<int>(rows.size());
    s.num_rats = static_cast<int>(rows.at(0).size());
    if (s.num_rats < 1) fail(Errc::parse_error, "'peak_rates' rows are empty");
    s.peak_rates.reserve(static_cast<size_t>(s.num_users) * s.num_rats);
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != s.num_rats)
        fail(Errc::parse_error, "'peak_rates' rows have inconsistent lengths");
      for (const auto& v : row) s.peak_rates.push_back(v.get<double>());
    }
    if (j.contains("user_labels"))
      s.user_labels = j.at("user_labels").get<std::vector<std::string>>();
    if (j.contains("rat_labels"))
      s.rat_labels = j.at("rat_labels").get<std::vector<std::string>>();
    return validate_scenario(std::move(s));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("scenario JSON: ") + e.what());
  }
}

std::string scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["alpha"] = s.alpha;
  auto rows = nlohmann::ordered_json::array();
  for (int u = 0; u < s.num_users; ++u) {
    auto row = nlohmann::ordered_json::array();
    for (int b = 0; b < s.num_rats; ++b) row.push_back(s.rate(u, b));
    rows.push_back(std::move(row));
  }
  j["peak_rates"] = std::move(rows);
  if (!s.user_labels.empty()) j["user_labels"] = s.user_labels;
  if (!s.rat_labels.empty()) j["rat_labels"] = s.rat_labels;
  return j.dump(2);
}

Allocation make_allocation(int num_users, int num_rats) {
  Allocation a;
  a.num_users = num_users;
  a.num_rats = num_rats;
  a.fractions.assign(static_cast<size_t>(num_users) * num_rats, 0.0);
  a.throughputs.assign(static_cast<size_t>(num_users), 0.0);
  return a;
}

void recompute_throughputs(Allocation& a, const Scenario& s) {
  for (int u = 0; u < a.num_users; ++u) {
    double r = 0.0;
    for (int b = 0; b < a.num_rats; ++b) r += a.frac(u, b) * s.rate(u, b);
    a.throughputs[u] = r;
  }
}

void check_feasible(const Allocation& a, const Scenario& s,
                    bool require_full_columns, double column_tolerance) {
  if (a.num_users != s.num_users || a.num_rats != s.num_rats)
    fail(Errc::infeasible, "allocation dimensions do not match scenario");
  for (int u = 0; u < a.num_users; ++u) {
    for (int b = 0; b < a.num_rats; ++b) {
      const double f = a.frac(u, b);
      if (!std::isfinite(f)) fail(Errc::infeasible, "fraction is not finite");
      if (f < -1e-12 || f > 1.0 + 1e-12)
        fail(Errc::infeasible, "fraction outside [0,1]");
      if (f > 1e-15 && s.rate(u, b) <= 0.0)
        fail(Errc::infeasible, "resources granted where there is no coverage");
    }
  }
  for (int b = 0; b < a.num_rats; ++b) {
    double col = 0.0;
    for (int u = 0; u < a.num_users; ++u) col += a.frac(u, b);
    const bool full = std::abs(col - 1.0) <= column_tolerance;
    const bool idle = !require_full_columns && std::abs(col) <= column_tolerance;
    if (!full && !idle) {
      std::ostringstream os;
      os << "RAT " << b << " column sums to " << col;
      fail(Errc::infeasible, os.str());
    }
  }
  for (int u = 0; u < a.num_users; ++u) {
    double r = 0.0;
    for (int b = 0; b < a.num_rats; ++b) r += a.frac(u, b) * s.rate(u, b);
    if (std::abs(r - a.throughputs[u]) >
        1e-9 * std::max(1.0, std::abs(a.throughputs[u])))
      fail(Errc::infeasible, "stored throughput inconsistent with fractions");
  }
}

}  // namespace ratagg
