#pragma once

#include <vector>

#include "core/dual.hpp"
#include "core/model.hpp"

namespace ratagg {

struct RefineResult {
  std::vector<double> lambdas;
  bool accepted = false;
  int rounds = 0;
};

/// Converts a near-optimal subgradient iterate into the exact stationary
/// point of the association structure it implies. Alternates between the
/// per-component closed form for the load indicators (single-RAT stationarity
/// plus the tie equations of the splitters) and structural moves: reassigning
/// users whose rate indicator is strictly better elsewhere, promoting users
/// that keep flipping between two RATs into splitters, and demoting ties
/// whose recovered fraction turns negative. Falls back to the input point
/// (accepted = false) when no consistent structure is found or the dual
/// objective would not improve.
RefineResult refine_lambdas(const Scenario& s, const std::vector<double>& start,
                            const SolverConfig& cfg);

}  // namespace ratagg
