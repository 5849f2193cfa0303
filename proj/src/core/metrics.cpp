#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "core/model.hpp"

namespace ratagg {

double percentile_nearest_rank(std::vector<double> values, double percentile) {
  if (values.empty())
    fail(Errc::invalid_argument, "percentile of an empty sample");
  if (!(percentile > 0.0) || percentile > 100.0)
    fail(Errc::invalid_argument, "percentile must be in (0, 100]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<size_t>(
      std::ceil(percentile / 100.0 * double(values.size())));
  return values[std::max<size_t>(rank, 1) - 1];
}

}  // namespace ratagg
