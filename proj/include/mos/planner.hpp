#pragma once

#include <vector>

#include "mos/candidates.hpp"
#include "mos/grid.hpp"
#include "mos/rng.hpp"

namespace mos {

struct PlannerModel {
  double lambda_move = 20.0;
  double lambda_frontier = 500.0;
  double lambda_target = 500.0;
  double gamma = 0.95;
  double delta = 1.0;  // detection threshold, meters
  double beta = 1.0;   // observation falloff, 1/meters
  int depth = 5;
  int n_sims = 500;
  double c_ucb = 500.0;      // half of lambda_frontier + lambda_target
  double resolution = 0.25;  // meters per cell, for Euclidean distances

  double reward_bound() const { return lambda_frontier + lambda_target; }
};

// s = (robot cell, hypothesized target cell); the target never moves.
struct PlanState {
  Cell robot;
  Cell target;
};

enum class ActionKind : uint8_t { Candidate = 0, Frontier = 1 };

// MoveTo(goal).
struct PlanAction {
  Cell goal;
  ActionKind kind = ActionKind::Candidate;

  friend bool operator==(const PlanAction&, const PlanAction&) = default;
};

struct GenResult {
  PlanState state;
  int obs = 0;  // 1 = target detected
  double reward = 0.0;
};

// Euclidean distance between cell centers, meters.
double euclid_m(const Cell& a, const Cell& b, double resolution);

// P(o=1 | robot at s_r', target at s_t): 1 within delta, exponential
// falloff beyond.
double observation_prob(const Cell& robot_after, const Cell& target, const PlannerModel& m);

// Movement cost plus exploration and detection bonuses.
double reward(const Cell& robot_before, const Cell& robot_after, const Cell& target,
              const PlanAction& a, const PlannerModel& m);

// G(s, a) -> (s', o, r): deterministic transition to the goal, stochastic
// binary observation, immediate reward.
GenResult generative_step(const PlanState& s, const PlanAction& a, const PlannerModel& m,
                          Prng& rng);

struct ActionStat {
  long n = 0;
  double q = 0.0;
};

struct PlanResult {
  int chosen = -1;                // index into the action list
  std::vector<ActionStat> root;   // per-action visit counts and values
};

// POUCT: Monte Carlo tree search over histories. Each simulation samples
// the target from the belief, descends by UCB1 (unvisited actions first,
// ties toward list order), expands one node, finishes with a uniform
// random rollout to the depth horizon, and backs up discounted returns.
// The returned action maximizes root Q (ties toward list order).
PlanResult pouct_plan(const CandidateSet& belief, const Cell& robot,
                      const std::vector<PlanAction>& actions, const PlannerModel& m,
                      Prng& rng);

}  // namespace mos
