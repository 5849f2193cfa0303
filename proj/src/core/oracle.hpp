#pragma once

#include <vector>

#include "core/model.hpp"

namespace ratagg {

/// Euclidean projection onto the probability simplex (sum one, nonnegative).
std::vector<double> project_to_simplex(std::vector<double> v);

/// Ground-truth primal solver kept fully independent of the dual pipeline:
/// gradient ascent on the network utility over the fractions with each RAT
/// column projected back onto the simplex (restricted to covered users), an
/// adaptive step accepted only on improvement, and the best feasible iterate
/// returned. step0 <= 0 picks a curvature-based default.
Allocation primal_projected_gradient(const Scenario& s, int max_iters = 20000,
                                     double step0 = 0.0);

/// Brute-force utility maximizer on the simplex grid with spacing
/// 1/resolution per column; only for tiny instances (num_users*num_rats <= 6).
Allocation exhaustive_grid(const Scenario& s, int resolution);

}  // namespace ratagg
