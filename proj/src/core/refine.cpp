#include "core/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "core/recovery.hpp"

namespace ratagg {

namespace {

constexpr int kMaxRounds = 2000;
constexpr double kRelSlack = 1e-9;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

double indicator(const Scenario& s, const std::vector<double>& lambdas, int u,
                 int b) {
  return s.rate(u, b) / lambdas[b];
}

int argmax_rat(const Scenario& s, const std::vector<double>& lambdas, int u) {
  int best = -1;
  double best_val = 0.0;
  for (int b = 0; b < s.num_rats; ++b) {
    if (s.rate(u, b) <= 0.0) continue;
    const double v = indicator(s, lambdas, u, b);
    if (best < 0 || v > best_val) {
      best = b;
      best_val = v;
    }
  }
  return best;
}

}  // namespace

RefineResult refine_lambdas(const Scenario& s, const std::vector<double>& start,
                            const SolverConfig& cfg) {
  RefineResult result{start, false, 0};
  if (s.alpha == 0.0) return result;
  const UtilityParams up(s.alpha);
  const int U = s.num_users;
  const int B = s.num_rats;

  // membership[u]: the RATs user u is hypothesized to use, ascending.
  std::vector<std::vector<int>> membership(U);
  for (int u = 0; u < U; ++u) membership[u] = {argmax_rat(s, start, u)};

  // visits[u][b] counts arrivals of u at b; a second arrival promotes the
  // flip into a tie, a demotion pushes the count well below zero.
  std::vector<std::map<int, int>> visits(U);
  for (int u = 0; u < U; ++u) visits[u][membership[u][0]] = 1;

  std::vector<double> lambdas = start;
  const double start_objective = dual_objective(start, s);

  for (int round = 1; round <= kMaxRounds; ++round) {
    result.rounds = round;

    // Components of RATs linked by the tie sets of the splitters.
    UnionFind uf(B);
    for (int u = 0; u < U; ++u)
      for (size_t k = 1; k < membership[u].size(); ++k)
        uf.unite(membership[u][0], membership[u][k]);

    // Ratios within a component follow from the tie equations: for a tied
    // user, lambda_b / lambda_a = c_b / c_a. BFS a spanning forest; every
    // non-tree edge closes a loop and is removed from its user's tie set.
    std::vector<double> weight(B, 0.0);
    bool changed = false;
    {
      struct Edge {
        int to, user, member;
        double ratio;
      };
      std::vector<std::vector<Edge>> adj(B);
      for (int u = 0; u < U; ++u) {
        const auto& m = membership[u];
        for (size_t k = 1; k < m.size(); ++k) {
          const double ratio = s.rate(u, m[k]) / s.rate(u, m[0]);
          adj[m[0]].push_back({m[k], u, m[k], ratio});
          adj[m[k]].push_back({m[0], u, m[k], 1.0 / ratio});
        }
      }
      std::vector<char> visited(B, 0);
      std::set<std::pair<int, int>> tree_edges;  // (user, member)
      for (int root = 0; root < B; ++root) {
        if (visited[root]) continue;
        visited[root] = 1;
        weight[root] = 1.0;
        std::vector<int> queue{root};
        while (!queue.empty()) {
          const int a = queue.back();
          queue.pop_back();
          for (const Edge& e : adj[a]) {
            if (!visited[e.to]) {
              visited[e.to] = 1;
              weight[e.to] = weight[a] * e.ratio;
              tree_edges.insert({e.user, e.member});
              queue.push_back(e.to);
            }
          }
        }
      }
      for (int u = 0; u < U; ++u) {
        const auto m = membership[u];
        for (size_t k = 1; k < m.size(); ++k) {
          if (!tree_edges.count({u, m[k]})) {
            auto& mm = membership[u];
            mm.erase(std::remove(mm.begin(), mm.end(), m[k]), mm.end());
            visits[u][m[k]] -= 3;
            changed = true;
          }
        }
      }
    }
    if (changed) continue;

    // Closed-form stationary point per component: summing the resource
    // constraints of a component eliminates the splitter shares, leaving
    // kappa^rho = P / sum(w) with lambda_b = kappa * w_b.
    {
      std::vector<double> psum(B, 0.0), wsum(B, 0.0);
      for (int u = 0; u < U; ++u) {
        const auto& m = membership[u];
        const int anchor = m[0];
        const int comp = uf.find(anchor);
        if (m.size() == 1) {
          psum[comp] += rate_power_term(s.rate(u, anchor), up.rho) *
                        std::pow(weight[anchor], 1.0 - up.rho);
        } else {
          psum[comp] +=
              std::pow(s.rate(u, anchor) / weight[anchor], up.rho - 1.0);
        }
      }
      for (int b = 0; b < B; ++b) wsum[uf.find(b)] += weight[b];
      std::vector<double> kappa(B, 0.0);
      for (int b = 0; b < B; ++b) {
        const int comp = uf.find(b);
        if (psum[comp] > 0.0)
          kappa[comp] = std::pow(psum[comp] / wsum[comp], 1.0 / up.rho);
      }
      for (int b = 0; b < B; ++b) {
        const double v = kappa[uf.find(b)] * weight[b];
        lambdas[b] = std::max(v, cfg.lambda_floor);
      }
      // A RAT nobody claims gets the load indicator at which its best
      // prospect is exactly indifferent, and that user joins it as a tie.
      std::vector<int> empty_rats;
      for (int b = 0; b < B; ++b)
        if (kappa[uf.find(b)] <= 0.0) empty_rats.push_back(b);
      if (!empty_rats.empty()) {
        for (int b : empty_rats)
          lambdas[b] = std::numeric_limits<double>::infinity();
        for (int b : empty_rats) {
          int best_user = -1;
          double best_lambda = 0.0;
          for (int u = 0; u < U; ++u) {
            if (s.rate(u, b) <= 0.0) continue;
            const int a = membership[u][0];
            const double m_u = indicator(s, lambdas, u, a);
            const double lam = s.rate(u, b) / m_u;
            if (lam > best_lambda) {
              best_lambda = lam;
              best_user = u;
            }
          }
          if (best_user < 0) return result;  // unattractive RAT, give up
          lambdas[b] = best_lambda;
          membership[best_user].push_back(b);
          std::sort(membership[best_user].begin(), membership[best_user].end());
          ++visits[best_user][b];
        }
        continue;
      }
    }

    // Structural consistency: nobody may strictly prefer a RAT outside their
    // hypothesized set. Users are moved one at a time, worst violation first,
    // so the load indicators keep up with every move.
    {
      int worst_user = -1, worst_target = -1;
      double worst_gap = 0.0;
      for (int u = 0; u < U; ++u) {
        const int bstar = argmax_rat(s, lambdas, u);
        const double best_val = indicator(s, lambdas, u, bstar);
        const double mine = indicator(s, lambdas, u, membership[u][0]);
        const double gap = (best_val - mine) / best_val;
        if (gap > kRelSlack && gap > worst_gap) {
          worst_gap = gap;
          worst_user = u;
          worst_target = bstar;
        }
      }
      if (worst_user >= 0) {
        const int u = worst_user;
        const int bstar = worst_target;
        const int arrivals = ++visits[u][bstar];
        if (membership[u].size() >= 2) {
          if (arrivals >= 0) {
            membership[u].push_back(bstar);
            std::sort(membership[u].begin(), membership[u].end());
          } else {
            membership[u] = {bstar};
          }
        } else if (arrivals >= 2) {
          const int anchor = membership[u][0];
          membership[u] = {std::min(anchor, bstar), std::max(anchor, bstar)};
        } else {
          membership[u] = {bstar};
        }
        continue;
      }
    }

    // Fraction consistency: a hypothesized tie whose recovered share is
    // negative is not part of the optimal structure.
    AssociationMap assoc;
    assoc.tie_tolerance = cfg.tie_tolerance;
    assoc.best_sets = membership;
    assoc.rat_users.assign(B, {});
    for (int u = 0; u < U; ++u) assoc.rat_users[membership[u][0]].push_back(u);
    const Allocation partial = single_rat_fractions(lambdas, s, assoc);
    const SplitterSolve solve = solve_splitter_fractions(lambdas, s, assoc, partial);
    if (!solve.unknowns.empty()) {
      if (solve.hard_residual > 1e-8) return result;
      changed = false;
      for (size_t k = 0; k < solve.unknowns.size(); ++k) {
        const double v = solve.values[k];
        if (v < -kRelSlack || v > 1.0 + kRelSlack) {
          const auto [uu, bb] = solve.unknowns[k];
          auto& mm = membership[uu];
          mm.erase(std::remove(mm.begin(), mm.end(), bb), mm.end());
          visits[uu][bb] -= 3;
          changed = true;
        }
      }
      if (changed) continue;
    }

    const double objective = dual_objective(lambdas, s);
    if (objective <= start_objective + 1e-9 * (1.0 + std::abs(start_objective))) {
      result.lambdas = lambdas;
      result.accepted = true;
    }
    return result;
  }
  return result;
}

}  // namespace ratagg
