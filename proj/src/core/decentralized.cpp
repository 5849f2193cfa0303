#include "core/decentralized.hpp"

#include <algorithm>
#include <cmath>

namespace ratagg {

std::string agent_name(int id, int num_rats) {
  if (id == kScheduler) return "scheduler";
  if (id == kBroadcast) return "*";
  if (id < num_rats) return "rat" + std::to_string(id);
  return "ue" + std::to_string(id - num_rats);
}

DecentralizedResult run_decentralized(const Scenario& s, const SolverConfig& cfg,
                                      bool assume_csi_at_rat,
                                      bool record_messages) {
  const UtilityParams up(s.alpha);
  DecentralizedResult out;
  DualState& st = out.state;
  ProtocolTrace& trace = out.trace;
  st = init_dual_state(s, cfg);
  trace.recorded = record_messages;

  std::vector<std::vector<double>> inbox(s.num_rats);
  for (int i = 1; i <= cfg.max_iterations; ++i) {
    const double eps = step_size(cfg, i);

    // Every RAT announces its load indicator.
    for (int b = 0; b < s.num_rats; ++b) {
      ++trace.message_count;
      trace.payload_bytes += 8;
      if (record_messages)
        trace.messages.push_back(
            {MessageKind::kLoadBroadcast, i, b, kBroadcast, st.lambdas[b], 0.0, -1});
    }

    // Every UE picks the RAT with the best rate indicator and reports there.
    for (int b = 0; b < s.num_rats; ++b) inbox[b].clear();
    for (int u = 0; u < s.num_users; ++u) {
      const std::vector<int> ties = user_tie_set(st.lambdas, s, u, cfg.tie_tolerance);
      const int chosen = ties.front();
      const double cterm = rate_power_term(s.rate(u, chosen), up.rho);
      inbox[chosen].push_back(cterm);
      ++trace.message_count;
      trace.payload_bytes += assume_csi_at_rat ? 4 : 12;
      if (record_messages)
        trace.messages.push_back({MessageKind::kSelectionReport, i,
                                  s.num_rats + u, chosen, cterm, 0.0, chosen});
    }

    // Every RAT updates its own indicator from its inbox and the shared step,
    // then reports the new value to the flow scheduler.
    std::vector<double> next(s.num_rats, 0.0);
    double norm_sq = 0.0;
    double movement = 0.0;
    for (int b = 0; b < s.num_rats; ++b) {
      const RatUpdate r = rat_update(st.lambdas[b], inbox[b], eps, up.rho,
                                     cfg.lambda_floor);
      const double g = 1.0 - r.load_sum;
      norm_sq += g * g;
      movement = std::max(movement, std::abs(r.new_lambda - st.lambdas[b]));
      next[b] = r.new_lambda;
      ++trace.message_count;
      trace.payload_bytes += 16;
      if (record_messages)
        trace.messages.push_back(
            {MessageKind::kLambdaUpdate, i, b, kScheduler, r.new_lambda, g, -1});
    }

    // Flow-scheduler bookkeeping, identical to the centralized loop.
    st.max_subgrad_norm = std::max(st.max_subgrad_norm, std::sqrt(norm_sq));
    st.lambdas = std::move(next);
    st.iteration = i;
    st.eps_sum += eps;
    st.eps_sq_sum += eps * eps;
    st.last_movement = movement;
    const double objective = dual_objective(st.lambdas, s);
    if (objective < st.best_objective) {
      st.best_objective = objective;
      st.best_lambdas = st.lambdas;
    }
    if (cfg.record_trace)
      st.trace.push_back({i, st.lambdas, objective, std::sqrt(norm_sq)});

    trace.rounds = i;
    if (st.last_movement < cfg.stop_tolerance) break;
  }

  trace.final_lambdas = st.lambdas;
  return out;
}

}  // namespace ratagg
