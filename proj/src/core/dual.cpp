#include "core/dual.hpp"

#include <algorithm>
#include <cmath>

namespace ratagg {

double step_size(const SolverConfig& cfg, int iteration) {
  switch (cfg.step_schedule) {
    case StepSchedule::kConstant: return cfg.epsilon0;
    case StepSchedule::kHarmonic: return cfg.epsilon0 / iteration;
    case StepSchedule::kSqrt: return cfg.epsilon0 / std::sqrt(double(iteration));
  }
  return cfg.epsilon0;
}

std::vector<double> default_initial_lambdas(const Scenario& s) {
  const UtilityParams up(s.alpha);
  const double per_rat = double(s.num_users) / double(s.num_rats);
  std::vector<double> out(s.num_rats, per_rat);
  for (int b = 0; b < s.num_rats; ++b) {
    double sum = 0.0;
    int n = 0;
    for (int u = 0; u < s.num_users; ++u) {
      if (s.rate(u, b) > 0.0) {
        sum += s.rate(u, b);
        ++n;
      }
    }
    const double mean_rate = sum / n;  // validation guarantees n >= 1
    out[b] = std::pow(per_rat * std::pow(mean_rate, up.rho - 1.0), 1.0 / up.rho);
  }
  return out;
}

std::vector<int> user_tie_set(const std::vector<double>& lambdas,
                              const Scenario& s, int u, double tie_tolerance) {
  double best = 0.0;
  for (int b = 0; b < s.num_rats; ++b) {
    const double c = s.rate(u, b);
    if (c > 0.0) best = std::max(best, c / lambdas[b]);
  }
  std::vector<int> ties;
  const double cut = (1.0 - tie_tolerance) * best;
  for (int b = 0; b < s.num_rats; ++b) {
    const double c = s.rate(u, b);
    if (c > 0.0 && c / lambdas[b] >= cut) ties.push_back(b);
  }
  return ties;
}

AssociationMap associate(const std::vector<double>& lambdas, const Scenario& s,
                         double tie_tolerance) {
  AssociationMap m;
  m.tie_tolerance = tie_tolerance;
  m.best_sets.resize(s.num_users);
  m.rat_users.resize(s.num_rats);
  for (int u = 0; u < s.num_users; ++u) {
    m.best_sets[u] = user_tie_set(lambdas, s, u, tie_tolerance);
    m.rat_users[m.best_sets[u].front()].push_back(u);
  }
  return m;
}

double dual_objective(const std::vector<double>& lambdas, const Scenario& s) {
  const UtilityParams up(s.alpha);
  const AssociationMap assoc = associate(lambdas, s, 0.0);
  double value = 0.0;
  for (int b = 0; b < s.num_rats; ++b) value += lambdas[b];
  if (s.alpha == 1.0) {
    for (int b = 0; b < s.num_rats; ++b)
      for (int u : assoc.rat_users[b]) value -= std::log(lambdas[b] / s.rate(u, b));
  } else {
    const double coeff = 1.0 / (up.rho - 1.0);
    for (int b = 0; b < s.num_rats; ++b)
      for (int u : assoc.rat_users[b])
        value += coeff * std::pow(lambdas[b] / s.rate(u, b), 1.0 - up.rho);
  }
  return value;
}

std::vector<double> subgradient(const std::vector<double>& lambdas,
                                const Scenario& s, const AssociationMap& assoc) {
  const UtilityParams up(s.alpha);
  std::vector<double> g(s.num_rats, 0.0);
  for (int b = 0; b < s.num_rats; ++b) {
    const double denom = std::pow(lambdas[b], up.rho);
    double sum = 0.0;
    for (int u : assoc.rat_users[b])
      sum += rate_power_term(s.rate(u, b), up.rho) / denom;
    g[b] = 1.0 - sum;
  }
  return g;
}

DualState init_dual_state(const Scenario& s, const SolverConfig& cfg) {
  if (s.alpha == 0.0)
    fail(Errc::alpha_zero_unsupported,
         "the dual program needs alpha > 0; alpha = 0 uses the closed form");
  DualState st;
  if (cfg.initial_lambda.empty()) {
    st.lambdas = default_initial_lambdas(s);
  } else if (cfg.initial_lambda.size() == 1) {
    st.lambdas.assign(s.num_rats, cfg.initial_lambda.front());
  } else if (cfg.initial_lambda.size() == static_cast<size_t>(s.num_rats)) {
    st.lambdas = cfg.initial_lambda;
  } else {
    fail(Errc::invalid_argument, "initial lambda size does not match num_rats");
  }
  for (double& v : st.lambdas) {
    if (!(v > 0.0)) fail(Errc::invalid_argument, "initial lambda must be positive");
    v = std::max(v, cfg.lambda_floor);
  }
  st.initial_lambdas = st.lambdas;
  st.best_objective = dual_objective(st.lambdas, s);
  st.best_lambdas = st.lambdas;
  if (cfg.record_trace) {
    const AssociationMap assoc = associate(st.lambdas, s, cfg.tie_tolerance);
    std::vector<double> g = subgradient(st.lambdas, s, assoc);
    double nsq = 0.0;
    for (double v : g) nsq += v * v;
    st.trace.push_back({0, st.lambdas, st.best_objective, std::sqrt(nsq)});
  }
  return st;
}

void step(DualState& st, const SolverConfig& cfg, const Scenario& s) {
  const UtilityParams up(s.alpha);
  const int i = st.iteration + 1;
  const double eps = step_size(cfg, i);
  const AssociationMap assoc = associate(st.lambdas, s, cfg.tie_tolerance);

  std::vector<double> next(st.lambdas.size(), 0.0);
  std::vector<double> cterms;
  double norm_sq = 0.0;
  double movement = 0.0;
  for (int b = 0; b < s.num_rats; ++b) {
    cterms.clear();
    for (int u : assoc.rat_users[b])
      cterms.push_back(rate_power_term(s.rate(u, b), up.rho));
    const RatUpdate r = rat_update(st.lambdas[b], cterms, eps, up.rho, cfg.lambda_floor);
    const double g = 1.0 - r.load_sum;
    norm_sq += g * g;
    movement = std::max(movement, std::abs(r.new_lambda - st.lambdas[b]));
    next[b] = r.new_lambda;
  }

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
}

DualState solve_dual(const Scenario& s, const SolverConfig& cfg) {
  DualState st = init_dual_state(s, cfg);
  for (int i = 1; i <= cfg.max_iterations; ++i) {
    step(st, cfg, s);
    if (st.last_movement < cfg.stop_tolerance) break;
  }
  return st;
}

double prop1_bound(double eps_sum, double eps_sq_sum,
                   const std::vector<double>& initial_lambdas,
                   const std::vector<double>& reference_lambdas, double G) {
  if (eps_sum <= 0.0) return std::numeric_limits<double>::infinity();
  double dist_sq = 0.0;
  for (size_t b = 0; b < initial_lambdas.size(); ++b) {
    const double d = initial_lambdas[b] - reference_lambdas[b];
    dist_sq += d * d;
  }
  return (dist_sq + G * G * eps_sq_sum) / (2.0 * eps_sum);
}

}  // namespace ratagg
