#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "expedition/core/error.hpp"

namespace expedition::planner {

enum class FantasyMode { sampled, mean };

inline std::string to_string(FantasyMode m) { return m == FantasyMode::sampled ? "sampled" : "mean"; }
inline FantasyMode fantasy_from_string(const std::string& s) {
  if (s == "sampled") return FantasyMode::sampled;
  if (s == "mean") return FantasyMode::mean;
  throw ValidationError("planner.fantasy_mode: expected \"sampled\" or \"mean\"");
}

struct PlannerConfig {
  double gamma = 0.95;      // discount
  int horizon = 5;          // planning iterations H
  int budget = 300;         // simulations per plan call
  double c_ucb = 0.5;       // exploration constant, scaled by the running max step reward
  double k_pw = 2.0;        // progressive widening: children <= ceil(k_pw * N^alpha_pw)
  double alpha_pw = 0.5;
  int m_maxvals = 10;       // max-value samples per plan call
  int rollout_depth = 3;    // random rollout length at leaves (capped by remaining horizon)
  FantasyMode fantasy_mode = FantasyMode::sampled;
};

inline void validate(const PlannerConfig& c) {
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) throw ValidationError("planner.gamma: must be in (0, 1]");
  if (c.horizon < 1) throw ValidationError("planner.H: must be >= 1");
  if (c.budget < 1) throw ValidationError("planner.budget: must be >= 1");
  if (!(c.k_pw > 0.0)) throw ValidationError("planner.k_pw: must be > 0");
  if (!(c.alpha_pw > 0.0 && c.alpha_pw < 1.0))
    throw ValidationError("planner.alpha_pw: must be in (0, 1)");
  if (c.m_maxvals < 1) throw ValidationError("planner.M_maxvals: must be >= 1");
  if (c.rollout_depth < 0) throw ValidationError("planner.rollout_depth: must be >= 0");
}

enum class PolicyKind { mcts, greedy_myopic, lawnmower_fixed, random };

inline std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::mcts: return "mcts";
    case PolicyKind::greedy_myopic: return "greedy_myopic";
    case PolicyKind::lawnmower_fixed: return "lawnmower_fixed";
    case PolicyKind::random: return "random";
  }
  return "mcts";
}
inline PolicyKind policy_from_string(const std::string& s) {
  if (s == "mcts") return PolicyKind::mcts;
  if (s == "greedy_myopic") return PolicyKind::greedy_myopic;
  if (s == "lawnmower_fixed") return PolicyKind::lawnmower_fixed;
  if (s == "random") return PolicyKind::random;
  throw ValidationError("policy: unknown kind \"" + s + "\"");
}

inline void to_json(nlohmann::json& j, const PlannerConfig& c) {
  j = nlohmann::json{{"gamma", c.gamma},
                     {"H", c.horizon},
                     {"budget", c.budget},
                     {"c_ucb", c.c_ucb},
                     {"k_pw", c.k_pw},
                     {"alpha_pw", c.alpha_pw},
                     {"M_maxvals", c.m_maxvals},
                     {"rollout_depth", c.rollout_depth},
                     {"fantasy_mode", to_string(c.fantasy_mode)}};
}
inline void from_json(const nlohmann::json& j, PlannerConfig& c) {
  c.gamma = j.value("gamma", c.gamma);
  c.horizon = j.value("H", c.horizon);
  c.budget = j.value("budget", c.budget);
  c.c_ucb = j.value("c_ucb", c.c_ucb);
  c.k_pw = j.value("k_pw", c.k_pw);
  c.alpha_pw = j.value("alpha_pw", c.alpha_pw);
  c.m_maxvals = j.value("M_maxvals", c.m_maxvals);
  c.rollout_depth = j.value("rollout_depth", c.rollout_depth);
  if (j.contains("fantasy_mode")) c.fantasy_mode = fantasy_from_string(j.at("fantasy_mode"));
}

}  // namespace expedition::planner
