#include "mos/agents.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "mos/nav.hpp"
#include "mos/rng.hpp"

namespace mos {

const char* agent_name(AgentKind k) {
  switch (k) {
    case AgentKind::Ovamos: return "ovamos";
    case AgentKind::OvamosNoPomdp: return "ovamos-no-pomdp";
    case AgentKind::OvamosNoDecay: return "ovamos-no-decay";
    case AgentKind::RandomWalk: return "random-walk";
    case AgentKind::GreedySingle: return "greedy-single";
    case AgentKind::GreedyMulti: return "greedy-multi";
  }
  return "?";
}

std::optional<AgentKind> parse_agent(const std::string& name) {
  for (AgentKind k : all_agents())
    if (name == agent_name(k)) return k;
  return std::nullopt;
}

std::vector<AgentKind> all_agents() {
  return {AgentKind::Ovamos,     AgentKind::OvamosNoPomdp, AgentKind::OvamosNoDecay,
          AgentKind::RandomWalk, AgentKind::GreedySingle,  AgentKind::GreedyMulti};
}

std::vector<std::string> EpisodeState::remaining_classes() const {
  std::vector<std::string> out;
  out.reserve(layers.size());
  for (const ValueLayer& l : layers) out.push_back(l.target_class);
  return out;
}

namespace {

Cell best_frontier(const FrontierSet& fs, int width) {
  const Frontier* best = &fs.frontiers.front();
  for (const Frontier& f : fs.frontiers)
    if (f.score > best->score ||
        (f.score == best->score && row_major(f.cell, width) < row_major(best->cell, width)))
      best = &f;
  return best->cell;
}

PolicyDecision frontier_greedy(const EpisodeState& st, const std::vector<ValueLayer>& layers) {
  PolicyDecision dec;
  const SharedValueMap shared = aggregate_layers(layers);
  const FrontierSet fs = extract_frontiers(st.known, shared, st.params.min_frontier_len);
  if (fs.frontiers.empty()) return dec;  // exhausted
  dec.waypoint = best_frontier(fs, st.known.width);
  return dec;
}

PolicyDecision random_walk(const EpisodeState& st) {
  PolicyDecision dec;
  const Cell robot = st.sc->cell_of(st.pose);
  std::vector<Cell> options;
  for (int y = 0; y < st.known.height; ++y)
    for (int x = 0; x < st.known.width; ++x) {
      const Cell c{x, y};
      if (st.known.at(c) != Occupancy::Free) continue;
      const double d = std::hypot(st.sc->center_x(c) - st.pose.x,
                                  st.sc->center_y(c) - st.pose.y);
      if (d > st.params.random_walk_radius) continue;
      if (!shortest_path(st.known, robot, c, /*unknown_is_free=*/true)) continue;
      options.push_back(c);
    }
  if (options.empty()) {
    dec.waypoint = robot;
    return dec;
  }
  Prng rng{st.sc->seed, stream_tag("randomwalk"), static_cast<uint64_t>(st.cycle)};
  dec.waypoint = options[rng.below(options.size())];
  return dec;
}

PolicyDecision value_pipeline(AgentKind kind, const EpisodeState& st) {
  PolicyDecision dec;
  SharedValueMap shared = aggregate_layers(st.layers);

  Grid2D<double> v_decayed;
  if (kind == AgentKind::OvamosNoDecay) {
    v_decayed = shared.v;
  } else {
    const Grid2D<int> u = combined_update_counts(st.layers);
    v_decayed = decayed_map(shared, u, st.params.decay);
  }

  const FrontierSet fs = extract_frontiers(st.known, shared, st.params.min_frontier_len);

  const Cell robot = st.sc->cell_of(st.pose);
  std::vector<Cell> points = cluster(v_decayed, st.params.cluster, st.known);
  points = filter_reachable(points, st.known, robot);

  const auto cs = build_candidates(v_decayed, points, fs, st.known.width);
  if (!cs) return dec;  // exhausted

  if (kind == AgentKind::OvamosNoPomdp) {
    // Highest decayed value wins; candidates beat the frontier on ties,
    // lower row-major wins within a group.
    bool have = false;
    Cell best{};
    double best_v = 0.0;
    for (const Cell& c : cs->points) {
      const double v = v_decayed.at(c);
      if (!have || v > best_v) {
        have = true;
        best = c;
        best_v = v;
      }
    }
    if (cs->frontier) {
      const double v = v_decayed.at(*cs->frontier);
      if (!have || v > best_v) {
        have = true;
        best = *cs->frontier;
        best_v = v;
      }
    }
    dec.waypoint = best;
    return dec;
  }

  for (const Cell& c : cs->points) dec.actions.push_back({c, ActionKind::Candidate});
  if (cs->frontier) dec.actions.push_back({*cs->frontier, ActionKind::Frontier});

  Prng rng{st.sc->seed, stream_tag("planner"), static_cast<uint64_t>(st.cycle)};
  dec.plan = pouct_plan(*cs, robot, dec.actions, st.params.planner, rng);
  dec.waypoint = dec.actions[dec.plan.chosen].goal;
  return dec;
}

}  // namespace

PolicyDecision step_policy(AgentKind kind, const EpisodeState& st) {
  switch (kind) {
    case AgentKind::Ovamos:
    case AgentKind::OvamosNoPomdp:
    case AgentKind::OvamosNoDecay:
      return value_pipeline(kind, st);
    case AgentKind::RandomWalk:
      return random_walk(st);
    case AgentKind::GreedySingle:
      return frontier_greedy(st, {st.layers.front()});
    case AgentKind::GreedyMulti:
      return frontier_greedy(st, st.layers);
  }
  return {};
}

EpisodeResult run_episode(const Scenario& sc, AgentKind kind, const EpisodeParams& params) {
  EpisodeState st;
  st.sc = &sc;
  st.params = params;
  st.known = OccupancyGrid(sc.grid_width, sc.grid_height, sc.resolution);
  for (const std::string& cls : sc.target_classes)
    st.layers.emplace_back(cls, sc.grid_width, sc.grid_height);
  st.pose = sc.robot_start;

  EpisodeResult res;
  res.kind = kind;

  while (true) {
    const SensorFrame frame = sense(sc, st.pose, st.cycle, st.remaining_classes());
    update_obstacles(st.known, frame);
    update_layers(st.layers, frame, sc.sensor.fov, sc.resolution);
    st.objects.record_detections(frame, st.cycle);

    for (const Detection& det : frame.detections) {
      auto it = std::find_if(st.layers.begin(), st.layers.end(), [&](const ValueLayer& l) {
        return l.target_class == det.class_label;
      });
      if (it == st.layers.end()) continue;
      const double d = std::hypot(sc.center_x(det.cell) - st.pose.x,
                                  sc.center_y(det.cell) - st.pose.y);
      if (d < 1.0) {
        res.events.push_back({det.class_label, st.cycle, st.steps_used});
        st.layers.erase(it);
      }
    }
    if (params.on_cycle) params.on_cycle(st);

    if (st.layers.empty()) {
      res.success = true;
      res.reason = "all_found";
      break;
    }
    if (st.steps_used >= params.step_budget) {
      res.reason = "step_budget";
      break;
    }
    if (st.cycle >= params.cycle_cap) {
      res.reason = "stalled";
      break;
    }

    const PolicyDecision dec = step_policy(kind, st);
    if (!dec.waypoint) {
      res.reason = "exhausted";
      break;
    }
    const AdvanceResult adv =
        advance(sc, st.pose, *dec.waypoint, st.known,
                std::min(params.steps_per_cycle, params.step_budget - st.steps_used));

    CycleRecord rec;
    rec.cycle = st.cycle;
    rec.pose = frame.pose;
    rec.waypoint = *dec.waypoint;
    rec.steps = adv.steps;
    rec.distance = adv.distance;
    rec.actions = dec.actions;
    rec.root = dec.plan.root;
    rec.chosen = dec.plan.chosen;
    res.trace.push_back(std::move(rec));

    st.pose = adv.pose;
    st.steps_used += adv.steps;
    res.path_length += adv.distance;
    st.cycle += 1;
  }

  res.steps = st.steps_used;
  res.cycles = st.cycle;
  return res;
}

std::string to_json(const EpisodeResult& r) {
  nlohmann::json j;
  j["agent"] = agent_name(r.kind);
  j["success"] = r.success;
  j["reason"] = r.reason;
  j["steps"] = r.steps;
  j["cycles"] = r.cycles;
  j["path_length"] = r.path_length;
  j["events"] = nlohmann::json::array();
  for (const FindEvent& e : r.events)
    j["events"].push_back({{"class", e.class_label}, {"cycle", e.cycle}, {"step", e.step}});
  j["trace"] = nlohmann::json::array();
  for (const CycleRecord& c : r.trace) {
    nlohmann::json t;
    t["cycle"] = c.cycle;
    t["pose"] = {c.pose.x, c.pose.y, c.pose.heading};
    t["waypoint"] = {c.waypoint.x, c.waypoint.y};
    t["steps"] = c.steps;
    t["distance"] = c.distance;
    t["chosen"] = c.chosen;
    t["actions"] = nlohmann::json::array();
    for (const PlanAction& a : c.actions)
      t["actions"].push_back({{"goal", {a.goal.x, a.goal.y}},
                              {"kind", a.kind == ActionKind::Frontier ? "frontier" : "candidate"}});
    t["root"] = nlohmann::json::array();
    for (const ActionStat& s : c.root) t["root"].push_back({{"n", s.n}, {"q", s.q}});
    j["trace"].push_back(std::move(t));
  }
  return j.dump();
}

}  // namespace mos
