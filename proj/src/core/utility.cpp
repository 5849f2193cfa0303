#include "core/utility.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ratagg {

UtilityParams::UtilityParams(double a) : alpha(a), rho(0.0) {
  if (!std::isfinite(a)) fail(Errc::non_finite, "alpha is not finite");
  if (a < 0.0) fail(Errc::negative_alpha, "alpha must be nonnegative");
  if (a == 0.0)
    fail(Errc::alpha_zero_unsupported,
         "alpha = 0 has no finite rho; use the closed-form sum-rate path");
  rho = 1.0 / a;
}

double f_alpha(double x, double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    fail(Errc::negative_alpha, "alpha must be finite and nonnegative");
  if (!std::isfinite(x)) fail(Errc::non_finite, "utility argument is not finite");
  if (alpha >= 1.0) {
    if (x <= 0.0)
      fail(Errc::domain_error,
           "utility undefined at x = " + std::to_string(x) + " for alpha >= 1");
  } else if (x < 0.0) {
    fail(Errc::domain_error, "utility undefined for negative rates");
  }
  if (alpha == 1.0) return std::log(x);
  return std::pow(x, 1.0 - alpha) / (1.0 - alpha);
}

double network_utility(const Allocation& a, double alpha) {
  double total = 0.0;
  for (double r : a.throughputs) {
    if (alpha >= 1.0 && r <= 0.0)
      return -std::numeric_limits<double>::infinity();
    total += f_alpha(r, alpha);
  }
  return total;
}

std::vector<double> split_ratios(const Allocation& a, const Scenario& s, int u) {
  const double r = a.throughputs[u];
  if (r <= 0.0)
    fail(Errc::zero_throughput,
         "user " + std::to_string(u) + " has zero throughput");
  std::vector<double> out(a.num_rats, 0.0);
  for (int b = 0; b < a.num_rats; ++b) out[b] = a.frac(u, b) * s.rate(u, b) / r;
  return out;
}

}  // namespace ratagg
