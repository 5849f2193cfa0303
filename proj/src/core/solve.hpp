#pragma once

#include <string>

#include "core/decentralized.hpp"
#include "core/dual.hpp"
#include "core/model.hpp"

namespace ratagg {

/// Full pipeline: subgradient solve (alpha > 0), optional structure
/// refinement, primal recovery through the splitter system, KKT residual and
/// diagnostics. alpha = 0 dispatches to the closed-form sum-rate solution.
SolveReport solve_scenario(const Scenario& s, const SolverConfig& cfg);

struct DecentralizedRun {
  SolveReport report;
  ProtocolTrace trace;
};

/// Same pipeline with the decentralized realization driving the dual phase.
/// rounds > 0 runs exactly that many rounds (stop rule disabled). When
/// verify is set, the centralized solver is run under the same configuration
/// and any difference in the final load indicators is an error.
DecentralizedRun solve_decentralized_scenario(const Scenario& s,
                                              const SolverConfig& cfg,
                                              int rounds = 0,
                                              bool assume_csi_at_rat = false,
                                              bool record_messages = false,
                                              bool verify = false);

std::string report_to_json(const SolveReport& r);
std::string trace_to_csv(const std::vector<TraceRow>& trace);
std::string messages_to_jsonl(const ProtocolTrace& trace, int num_rats,
                              bool assume_csi_at_rat);

}  // namespace ratagg
