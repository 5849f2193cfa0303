#include "core/synth.hpp"

#include <cmath>
#include <random>

#include "json.hpp"

namespace ratagg {

namespace {

constexpr int kMaxAttempts = 100;

double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

struct Point {
  double x, y;
};

/// Anchor RAT at the center, the rest on a fixed grid over the area.
std::vector<Point> ap_positions(int num_rats, double area) {
  std::vector<Point> pos;
  pos.push_back({area / 2.0, area / 2.0});
  const int rest = num_rats - 1;
  if (rest > 0) {
    const int g = static_cast<int>(std::ceil(std::sqrt(double(rest))));
    for (int k = 0; k < rest; ++k) {
      const int i = k % g;
      const int j = k / g;
      pos.push_back({(i + 0.5) * area / g, (j + 0.5) * area / g});
    }
  }
  return pos;
}

}  // namespace

GeneratorParams default_params(int num_rats) {
  GeneratorParams p;
  for (int b = 0; b < num_rats; ++b) {
    if (b == 0) {
      // Wide anchor cell.
      p.bandwidths_hz.push_back(10e6);
      p.tx_powers_dbm.push_back(24.0);
      p.coverage_radius_m.push_back(10.0 * p.area_m);
    } else {
      // Local high-bandwidth cells.
      p.bandwidths_hz.push_back(20e6);
      p.tx_powers_dbm.push_back(18.0);
      p.coverage_radius_m.push_back(0.5 * p.area_m);
    }
  }
  return p;
}

GeneratorParams params_from_json(const std::string& text, int num_rats) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("generator params JSON: ") + e.what());
  }
  GeneratorParams p = default_params(num_rats);
  try {
    if (j.contains("area_m")) p.area_m = j["area_m"].get<double>();
    if (j.contains("pathloss_exp")) p.pathloss_exp = j["pathloss_exp"].get<double>();
    if (j.contains("noise_dbm_hz")) p.noise_dbm_hz = j["noise_dbm_hz"].get<double>();
    if (j.contains("ref_loss_db")) p.ref_loss_db = j["ref_loss_db"].get<double>();
    if (j.contains("min_distance_m"))
      p.min_distance_m = j["min_distance_m"].get<double>();
    if (j.contains("alpha")) p.alpha = j["alpha"].get<double>();
    if (j.contains("rats")) {
      const auto& rats = j["rats"];
      if (!rats.is_array()) fail(Errc::parse_error, "'rats' must be an array");
      for (int b = 0; b < num_rats && b < static_cast<int>(rats.size()); ++b) {
        const auto& r = rats.at(b);
        if (r.contains("bandwidth_hz"))
          p.bandwidths_hz[b] = r["bandwidth_hz"].get<double>();
        if (r.contains("tx_power_dbm"))
          p.tx_powers_dbm[b] = r["tx_power_dbm"].get<double>();
        if (r.contains("coverage_radius_m"))
          p.coverage_radius_m[b] = r["coverage_radius_m"].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("generator params JSON: ") + e.what());
  }
  if (p.area_m <= 0.0 || p.min_distance_m <= 0.0 || p.pathloss_exp <= 0.0)
    fail(Errc::invalid_argument, "generator params must be positive");
  return p;
}

std::string params_to_json(const GeneratorParams& p) {
  nlohmann::ordered_json j;
  j["area_m"] = p.area_m;
  j["pathloss_exp"] = p.pathloss_exp;
  j["noise_dbm_hz"] = p.noise_dbm_hz;
  j["ref_loss_db"] = p.ref_loss_db;
  j["min_distance_m"] = p.min_distance_m;
  j["alpha"] = p.alpha;
  auto rats = nlohmann::ordered_json::array();
  for (size_t b = 0; b < p.bandwidths_hz.size(); ++b) {
    nlohmann::ordered_json r;
    r["bandwidth_hz"] = p.bandwidths_hz[b];
    r["tx_power_dbm"] = p.tx_powers_dbm[b];
    r["coverage_radius_m"] = p.coverage_radius_m[b];
    rats.push_back(std::move(r));
  }
  j["rats"] = std::move(rats);
  return j.dump(2);
}

double shannon_rate_mbps(const GeneratorParams& p, int rat, double distance_m) {
  const double d = std::max(distance_m, p.min_distance_m);
  if (distance_m > p.coverage_radius_m[rat]) return 0.0;
  const double path_loss_db =
      p.ref_loss_db + 10.0 * p.pathloss_exp * std::log10(d / 1.0);
  const double rx_dbm = p.tx_powers_dbm[rat] - path_loss_db;
  const double noise_dbm =
      p.noise_dbm_hz + 10.0 * std::log10(p.bandwidths_hz[rat]);
  const double snr = std::pow(10.0, (rx_dbm - noise_dbm) / 10.0);
  return p.bandwidths_hz[rat] * std::log2(1.0 + snr) / 1e6;
}

Scenario generate(std::uint64_t seed, int num_users, int num_rats,
                  const GeneratorParams& params) {
  if (num_users < 1 || num_rats < 1)
    fail(Errc::invalid_argument, "generate needs at least one user and one RAT");
  if (params.bandwidths_hz.size() < static_cast<size_t>(num_rats) ||
      params.tx_powers_dbm.size() < static_cast<size_t>(num_rats) ||
      params.coverage_radius_m.size() < static_cast<size_t>(num_rats))
    fail(Errc::invalid_argument, "generator params missing per-RAT entries");

  const std::vector<Point> aps = ap_positions(num_rats, params.area_m);
  std::string last_error;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + attempt);
    Scenario s = make_scenario(num_users, num_rats, params.alpha);
    for (int u = 0; u < num_users; ++u) {
      const double x = uniform01(rng) * params.area_m;
      const double y = uniform01(rng) * params.area_m;
      for (int b = 0; b < num_rats; ++b) {
        const double d = std::hypot(x - aps[b].x, y - aps[b].y);
        s.rate(u, b) = shannon_rate_mbps(params, b, d);
      }
    }
    for (int u = 0; u < num_users; ++u)
      s.user_labels.push_back("ue" + std::to_string(u));
    for (int b = 0; b < num_rats; ++b)
      s.rat_labels.push_back(b == 0 ? "anchor0" : "cell" + std::to_string(b));
    try {
      return validate_scenario(std::move(s));
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  fail(Errc::degenerate_instance,
       "no valid instance after " + std::to_string(kMaxAttempts) +
           " attempts: " + last_error);
}

std::vector<std::vector<Scenario>> load_sweep(const GeneratorParams& params,
                                              int base_users, int num_rats,
                                              const std::vector<double>& levels,
                                              int seeds_per_level,
                                              std::uint64_t seed) {
  if (base_users < 1 || seeds_per_level < 1)
    fail(Errc::invalid_argument, "load_sweep needs positive sizes");
  std::vector<std::vector<Scenario>> out;
  for (size_t li = 0; li < levels.size(); ++li) {
    if (!(levels[li] > 0.0))
      fail(Errc::invalid_argument, "utilization levels must be positive");
    const int users = std::max(1, static_cast<int>(std::lround(base_users * levels[li])));
    std::vector<Scenario> set;
    for (int k = 0; k < seeds_per_level; ++k)
      set.push_back(generate(seed + 10007ULL * li + k, users, num_rats, params));
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace ratagg
