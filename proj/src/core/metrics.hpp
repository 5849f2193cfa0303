#pragma once

#include <vector>

namespace ratagg {

/// Nearest-rank percentile (no interpolation): the ceil(p/100 * n)-th
/// smallest value, percentile in (0, 100].
double percentile_nearest_rank(std::vector<double> values, double percentile);

}  // namespace ratagg
