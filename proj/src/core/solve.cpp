#include "core/solve.hpp"

#include <cmath>
#include <sstream>

#include "core/recovery.hpp"
#include "core/refine.hpp"
#include "core/utility.hpp"
#include "json.hpp"

namespace ratagg {

namespace {

SolveReport recover_report(const Scenario& s, const SolverConfig& cfg,
                           DualState st) {
  SolveReport r;
  r.alpha = s.alpha;
  r.iterations_used = st.iteration;

  std::vector<double> lambdas = st.best_lambdas;
  if (cfg.refine) {
    const RefineResult rr = refine_lambdas(s, lambdas, cfg);
    if (rr.accepted) {
      lambdas = rr.lambdas;
      r.refined = true;
    }
  }

  const AssociationMap assoc = associate(lambdas, s, cfg.tie_tolerance);
  const Allocation partial = single_rat_fractions(lambdas, s, assoc);
  r.allocation = splitter_system(lambdas, s, assoc, partial);
  r.kkt_residual = kkt_residual(r.allocation, lambdas, s, s.alpha);
  r.splitter_count = total_splitters(assoc);
  r.primal_utility = network_utility(r.allocation, s.alpha);
  r.dual_objective = dual_objective(lambdas, s);
  r.duality_gap_bound = prop1_bound(st.eps_sum, st.eps_sq_sum,
                                    st.initial_lambdas, lambdas,
                                    st.max_subgrad_norm);
  r.lambdas = std::move(lambdas);
  r.trace = std::move(st.trace);
  return r;
}

}  // namespace

SolveReport solve_scenario(const Scenario& s, const SolverConfig& cfg) {
  if (s.alpha == 0.0) {
    SolveReport r;
    r.alpha = 0.0;
    r.allocation = alpha_zero_solution(s);
    r.primal_utility = network_utility(r.allocation, 0.0);
    r.dual_objective = r.primal_utility;  // closed form is exact
    r.kkt_residual = 0.0;
    r.duality_gap_bound = 0.0;
    return r;
  }
  return recover_report(s, cfg, solve_dual(s, cfg));
}

DecentralizedRun solve_decentralized_scenario(const Scenario& s,
                                              const SolverConfig& cfg,
                                              int rounds, bool assume_csi_at_rat,
                                              bool record_messages, bool verify) {
  SolverConfig effective = cfg;
  if (rounds > 0) {
    effective.max_iterations = rounds;
    effective.stop_tolerance = 0.0;
  }
  DecentralizedResult res =
      run_decentralized(s, effective, assume_csi_at_rat, record_messages);
  if (verify) {
    const DualState central = solve_dual(s, effective);
    bool same = central.iteration == res.state.iteration &&
                central.lambdas.size() == res.state.lambdas.size();
    if (same)
      for (size_t b = 0; b < central.lambdas.size(); ++b)
        same = same && central.lambdas[b] == res.state.lambdas[b];
    if (!same)
      fail(Errc::verify_mismatch,
           "decentralized load indicators diverge from the centralized run");
  }
  DecentralizedRun run;
  run.report = recover_report(s, effective, std::move(res.state));
  run.report.message_count = res.trace.message_count;
  run.trace = std::move(res.trace);
  return run;
}

std::string report_to_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["alpha"] = r.alpha;
  j["num_users"] = r.allocation.num_users;
  j["num_rats"] = r.allocation.num_rats;
  j["primal_utility"] = r.primal_utility;
  j["dual_objective"] = r.dual_objective;
  j["kkt_residual"] = r.kkt_residual;
  j["splitter_count"] = r.splitter_count;
  j["iterations_used"] = r.iterations_used;
  j["duality_gap_bound"] = r.duality_gap_bound;
  j["refined"] = r.refined;
  if (r.message_count) j["message_count"] = *r.message_count;
  j["lambdas"] = r.lambdas;
  nlohmann::ordered_json alloc;
  auto rows = nlohmann::ordered_json::array();
  for (int u = 0; u < r.allocation.num_users; ++u) {
    auto row = nlohmann::ordered_json::array();
    for (int b = 0; b < r.allocation.num_rats; ++b)
      row.push_back(r.allocation.frac(u, b));
    rows.push_back(std::move(row));
  }
  alloc["fractions"] = std::move(rows);
  alloc["throughputs"] = r.allocation.throughputs;
  j["allocation"] = std::move(alloc);
  return j.dump(2);
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iter";
  if (!trace.empty())
    for (size_t b = 0; b < trace.front().lambdas.size(); ++b)
      os << ",lambda_" << b;
  os << ",F,subgrad_norm\n";
  for (const TraceRow& row : trace) {
    os << row.iteration;
    for (double v : row.lambdas) os << ',' << v;
    os << ',' << row.objective << ',' << row.subgrad_norm << '\n';
  }
  return os.str();
}

std::string messages_to_jsonl(const ProtocolTrace& trace, int num_rats,
                              bool assume_csi_at_rat) {
  std::ostringstream os;
  for (const Message& m : trace.messages) {
    nlohmann::ordered_json j;
    j["round"] = m.round;
    switch (m.kind) {
      case MessageKind::kLoadBroadcast:
        j["kind"] = "load_broadcast";
        break;
      case MessageKind::kSelectionReport:
        j["kind"] = "selection_report";
        break;
      case MessageKind::kLambdaUpdate:
        j["kind"] = "lambda_update";
        break;
    }
    j["from"] = agent_name(m.from, num_rats);
    j["to"] = agent_name(m.to, num_rats);
    nlohmann::ordered_json payload;
    if (m.kind == MessageKind::kSelectionReport) {
      payload["rat"] = m.selection;
      if (!assume_csi_at_rat) payload["cterm"] = m.value;
    } else {
      payload["lambda"] = m.value;
      if (m.kind == MessageKind::kLambdaUpdate) payload["subgradient"] = m.extra;
    }
    j["payload"] = std::move(payload);
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace ratagg
