#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "expedition/core/error.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/planner/config.hpp"

namespace expedition::planner::mcts {

/* Progressively-widened Monte Carlo tree search over a belief-MDP.
 *
 * The Model supplies the state (belief plus whatever else evolves), proposes
 * actions, simulates one edge (mutating the state and returning the step
 * reward), and estimates leaf values by rollout. Tree nodes index action
 * histories only; every traversal re-simulates the edge from a fresh copy of
 * the root state, drawing a fresh fantasized observation, so edge statistics
 * average over the observation distribution.
 *
 * Model concept:
 *   using State  = ...;   // copyable, assignable
 *   using Action = ...;   // copyable
 *   int max_actions() const;                          // 0 = unbounded
 *   Action propose(const State&, int child_count, Rng&);
 *   double step(State&, const Action&, Rng&);         // returns step reward
 *   double rollout(State&, int steps, double gamma, Rng&);
 */

struct TreeAudit {
  bool widening_ok = true;  // every node: children <= ceil(k_pw * N^alpha_pw)
  double q_min = 0.0;
  double q_max = 0.0;
  double r_max = 0.0;  // max single-step reward seen this call
  int nodes = 0;
};

template <class Action>
struct RootChildStat {
  Action action;
  int visits = 0;
  double q = 0.0;
};

template <class Action>
struct SearchResult {
  Action action;        // root action with the most visits (ties: larger Q, then first created)
  double root_q = 0.0;  // Q of the returned action
  int root_visits = 0;
  int simulations = 0;
  TreeAudit audit;
  std::vector<RootChildStat<Action>> root_children;
};

template <class Model>
SearchResult<typename Model::Action> search(Model& model,
                                            const typename Model::State& root_state,
                                            const PlannerConfig& cfg, Rng& rng) {
  using Action = typename Model::Action;
  using State = typename Model::State;
  validate(cfg);

  struct Edge {
    Action action;
    double q = 0.0;
    int visits = 0;
    int child = -1;
  };
  struct Node {
    int visits = 0;
    std::vector<Edge> edges;
  };

  std::vector<Node> pool(1);
  pool.reserve(static_cast<std::size_t>(cfg.budget) + 1);
  double r_max = 0.0;

  auto child_limit = [&](int visits) {
    std::size_t lim = static_cast<std::size_t>(
        std::ceil(cfg.k_pw * std::pow(static_cast<double>(visits), cfg.alpha_pw)));
    if (lim < 1) lim = 1;
    if (const int ma = model.max_actions(); ma > 0)
      lim = std::min(lim, static_cast<std::size_t>(ma));
    return lim;
  };

  State scratch = root_state;
  std::vector<std::pair<int, int>> path;  // (node index, edge index)
  std::vector<double> rewards;

  for (int sim = 0; sim < cfg.budget; ++sim) {
    scratch = root_state;  // assignment reuses the scratch buffers
    path.clear();
    rewards.clear();
    int node = 0;
    double leaf_value = 0.0;

    for (int depth = 0; depth < cfg.horizon; ++depth) {
      pool[node].visits++;
      const std::size_t limit = child_limit(pool[node].visits);
      int ei;
      if (pool[node].edges.size() < limit) {
        Edge e;
        e.action = model.propose(scratch, static_cast<int>(pool[node].edges.size()), rng);
        pool[node].edges.push_back(e);
        ei = static_cast<int>(pool[node].edges.size()) - 1;
      } else {
        const double c_eff = cfg.c_ucb * std::max(r_max, 1e-12);
        const double log_n = std::log(static_cast<double>(std::max(pool[node].visits, 1)));
        ei = 0;
        double best = -1e300;
        for (std::size_t i = 0; i < pool[node].edges.size(); ++i) {
          const Edge& e = pool[node].edges[i];
          const double ucb = e.q + c_eff * std::sqrt(log_n / e.visits);
          if (ucb > best) {
            best = ucb;
            ei = static_cast<int>(i);
          }
        }
      }

      const double r = model.step(scratch, pool[node].edges[ei].action, rng);
      r_max = std::max(r_max, r);
      path.emplace_back(node, ei);
      rewards.push_back(r);

      if (pool[node].edges[ei].child < 0) {
        pool.push_back(Node{});
        pool[node].edges[ei].child = static_cast<int>(pool.size()) - 1;
        const int remaining = cfg.horizon - depth - 1;
        leaf_value =
            model.rollout(scratch, std::min(cfg.rollout_depth, remaining), cfg.gamma, rng);
        break;
      }
      node = pool[node].edges[ei].child;
    }

    double g = leaf_value;
    for (int d = static_cast<int>(path.size()) - 1; d >= 0; --d) {
      g = rewards[d] + cfg.gamma * g;
      Edge& e = pool[path[d].first].edges[path[d].second];
      e.visits++;
      e.q += (g - e.q) / e.visits;
    }
  }

  const Node& root = pool[0];
  if (root.edges.empty()) throw NumericalError("mcts: no action expanded (budget >= 1 required)");

  int best = 0;
  for (std::size_t i = 1; i < root.edges.size(); ++i) {
    const Edge& e = root.edges[i];
    const Edge& b = root.edges[best];
    if (e.visits > b.visits || (e.visits == b.visits && e.q > b.q))
      best = static_cast<int>(i);
  }

  SearchResult<Action> res;
  res.action = root.edges[best].action;
  res.root_q = root.edges[best].q;
  res.root_visits = root.edges[best].visits;
  res.simulations = cfg.budget;
  res.audit.r_max = r_max;
  res.audit.nodes = static_cast<int>(pool.size());
  bool first = true;
  for (const Node& nd : pool) {
    if (nd.visits >= 1 && nd.edges.size() > child_limit(nd.visits)) res.audit.widening_ok = false;
    for (const Edge& e : nd.edges) {
      if (first || e.q < res.audit.q_min) res.audit.q_min = e.q;
      if (first || e.q > res.audit.q_max) res.audit.q_max = e.q;
      first = false;
    }
  }
  for (const Edge& e : root.edges) res.root_children.push_back({e.action, e.visits, e.q});
  return res;
}

}  // namespace expedition::planner::mcts
