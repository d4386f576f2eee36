#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mos/candidates.hpp"
#include "mos/mapping.hpp"
#include "mos/planner.hpp"
#include "mos/scenario.hpp"
#include "mos/sim.hpp"

namespace mos {

enum class AgentKind {
  Ovamos,
  OvamosNoPomdp,
  OvamosNoDecay,
  RandomWalk,
  GreedySingle,
  GreedyMulti,
};

const char* agent_name(AgentKind k);
std::optional<AgentKind> parse_agent(const std::string& name);

// Every agent kind, in canonical reporting order.
std::vector<AgentKind> all_agents();

struct EpisodeParams {
  DecayParams decay;
  ClusterParams cluster;
  PlannerModel planner;
  int min_frontier_len = 3;
  long step_budget = 500;
  // Steps executed per planning cycle before the policy re-plans. Small
  // values keep the sensing rate close to the motion rate, which is what
  // the update-count decay timescale assumes.
  long steps_per_cycle = 4;
  // Planning cycles that execute zero steps still count; this cap ends
  // episodes that settle into a zero-motion loop instead of spinning
  // forever on an untouched step budget.
  long cycle_cap = 500;
  double random_walk_radius = 3.0;  // meters
  // Optional observer called after each cycle's map update.
  std::function<void(const struct EpisodeState&)> on_cycle;
};

// Mutable per-episode state; policies read it, run_episode owns it.
struct EpisodeState {
  const Scenario* sc = nullptr;
  EpisodeParams params;
  OccupancyGrid known;
  std::vector<ValueLayer> layers;  // one per remaining class, scenario order
  ObjectMap objects;
  Pose pose;
  long cycle = 0;
  long steps_used = 0;

  std::vector<std::string> remaining_classes() const;
};

struct PolicyDecision {
  std::optional<Cell> waypoint;     // nullopt = exploration exhausted
  std::vector<PlanAction> actions;  // populated by the planning agent
  PlanResult plan;                  // ditto
};

// One waypoint decision. Pure in the state: identical states yield
// identical decisions (randomized agents key their draws on the cycle).
PolicyDecision step_policy(AgentKind kind, const EpisodeState& st);

struct FindEvent {
  std::string class_label;
  long cycle = 0;
  long step = 0;
};

struct CycleRecord {
  long cycle = 0;
  Pose pose;  // at sense time
  Cell waypoint;
  long steps = 0;
  double distance = 0.0;
  std::vector<PlanAction> actions;
  std::vector<ActionStat> root;
  int chosen = -1;
};

struct EpisodeResult {
  AgentKind kind = AgentKind::Ovamos;
  bool success = false;
  std::string reason;  // all_found | step_budget | exhausted | stalled
  long steps = 0;
  long cycles = 0;
  double path_length = 0.0;  // meters actually travelled
  std::vector<FindEvent> events;
  std::vector<CycleRecord> trace;
};

// Stable serialization (fixed field order) for replay comparisons.
std::string to_json(const EpisodeResult& r);

// sense -> map update -> found check -> policy -> advance, until all
// targets are found, the step budget or cycle cap runs out, or the
// policy reports exploration exhausted. A target counts as found when a
// detection of a remaining class lands while its object truly sits
// within 1 m of the robot.
EpisodeResult run_episode(const Scenario& sc, AgentKind kind, const EpisodeParams& params);

}  // namespace mos
