#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mos/agents.hpp"
#include "mos/harness.hpp"
#include "mos/scenario.hpp"

namespace {

struct GenOptions {
  mos::GenSpec spec;
  int n = 50;
  uint64_t seed = 42;
};

void add_gen_options(CLI::App* cmd, GenOptions& g) {
  cmd->add_option("--n", g.n, "number of scenarios");
  cmd->add_option("--seed", g.seed, "master seed");
  cmd->add_option("--width", g.spec.width, "grid width in cells");
  cmd->add_option("--height", g.spec.height, "grid height in cells");
  cmd->add_option("--resolution", g.spec.resolution, "meters per cell");
  cmd->add_option("--k", g.spec.k, "number of target classes (<= 6)");
  cmd->add_option("--density", g.spec.obstacle_density, "furniture fill fraction");
  cmd->add_option("--rooms", g.spec.rooms, "wall splitting passes");
  cmd->add_option("--fov", g.spec.sensor.fov, "sensor field of view (radians)");
  cmd->add_option("--view-range", g.spec.sensor.view_range, "visibility radius (m)");
  cmd->add_option("--detect-range", g.spec.sensor.detect_range, "detector radius (m)");
  cmd->add_option("--miss-prob", g.spec.sensor.miss_prob, "detector miss probability");
  cmd->add_option("--scorer-sigma", g.spec.noise.scorer_sigma, "scorer falloff (m)");
  cmd->add_option("--scorer-noise", g.spec.noise.scorer_noise_sd, "scorer noise sd");
  cmd->add_option("--ambient", g.spec.noise.ambient_score, "scorer ambient floor");
}

struct ParamOptions {
  mos::EpisodeParams params;
};

void add_param_options(CLI::App* cmd, ParamOptions& p) {
  cmd->add_option("--tau", p.params.decay.tau, "decay midpoint (update count)");
  cmd->add_option("--kappa", p.params.decay.kappa, "decay softness");
  cmd->add_option("--eps", p.params.cluster.eps, "DBSCAN radius (cells)");
  cmd->add_option("--min-pts", p.params.cluster.min_pts, "DBSCAN core threshold");
  cmd->add_option("--value-threshold", p.params.cluster.value_threshold,
                  "cluster value cut");
  cmd->add_option("--depth", p.params.planner.depth, "POUCT depth");
  cmd->add_option("--n-sims", p.params.planner.n_sims, "POUCT simulations per plan");
  cmd->add_option("--c-ucb", p.params.planner.c_ucb, "UCB exploration constant");
  cmd->add_option("--gamma", p.params.planner.gamma, "discount factor");
  cmd->add_option("--min-frontier-len", p.params.min_frontier_len,
                  "minimum frontier chain length");
  cmd->add_option("--step-budget", p.params.step_budget, "max grid steps per episode");
  cmd->add_option("--cycle-cap", p.params.cycle_cap, "max planning cycles per episode");
}

std::vector<mos::AgentKind> parse_agents(const std::vector<std::string>& names) {
  if (names.empty()) return mos::all_agents();
  std::vector<mos::AgentKind> out;
  for (const std::string& n : names) {
    const auto k = mos::parse_agent(n);
    if (!k) throw CLI::ValidationError("--agents", "unknown agent '" + n + "'");
    out.push_back(*k);
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

std::string scenario_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

int cmd_gen(const GenOptions& g, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::vector<mos::Scenario> scs = mos::generate_scenarios(g.spec, g.n, g.seed);
  for (size_t i = 0; i < scs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "gen-%03zu.json", i);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    mos::save_scenario_file(scs[i], path);
    std::cout << path << "\n";
  }
  return 0;
}

int cmd_run(const std::vector<std::string>& scenario_paths, const GenOptions& g, bool use_gen,
            const std::vector<std::string>& agent_names, const ParamOptions& p, int jobs,
            const std::string& out_csv, const std::string& out_summary) {
  mos::BatchConfig config;
  if (use_gen) {
    config.scenarios = mos::generate_scenarios(g.spec, g.n, g.seed);
    for (size_t i = 0; i < config.scenarios.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "gen-%03zu", i);
      config.scenario_names.push_back(name);
    }
  } else {
    for (const std::string& path : scenario_paths) {
      config.scenarios.push_back(mos::load_scenario_file(path));
      config.scenario_names.push_back(scenario_stem(path));
    }
  }
  config.agents = parse_agents(agent_names);
  config.params = p.params;
  config.jobs = jobs;

  const mos::BatchResult result = mos::run_batch(config);
  const std::string csv = mos::rows_to_csv(result.rows);
  if (!out_csv.empty()) write_file(out_csv, csv);
  const std::string summary = mos::summary_json(result, config);
  if (!out_summary.empty()) write_file(out_summary, summary);
  std::cout << summary;
  return 0;
}

int cmd_replay(const std::string& scenario_path, const std::string& agent_name,
               const ParamOptions& p, const std::string& dump_maps,
               const std::string& trace_path, const std::string& out_path) {
  const mos::Scenario sc = mos::load_scenario_file(scenario_path);
  const auto kind = mos::parse_agent(agent_name);
  if (!kind) throw CLI::ValidationError("--agent", "unknown agent '" + agent_name + "'");

  mos::EpisodeParams params = p.params;
  std::ofstream dump;
  if (!dump_maps.empty()) {
    dump.open(dump_maps, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot open for writing: " + dump_maps);
    params.on_cycle = [&dump, &sc](const mos::EpisodeState& st) {
      for (const mos::ValueLayer& layer : st.layers) {
        nlohmann::json j;
        j["cycle"] = st.cycle;
        j["class"] = layer.target_class;
        j["width"] = layer.v.width;
        j["height"] = layer.v.height;
        j["resolution"] = sc.resolution;
        j["v"] = layer.v.data;
        j["c"] = layer.c.data;
        j["u"] = layer.u.data;
        dump << j.dump() << "\n";
      }
    };
  }

  const mos::EpisodeResult result = mos::run_episode(sc, *kind, params);

  if (!trace_path.empty()) {
    std::ofstream tr(trace_path, std::ios::binary);
    if (!tr) throw std::runtime_error("cannot open for writing: " + trace_path);
    for (const mos::CycleRecord& c : result.trace) {
      nlohmann::json j;
      j["cycle"] = c.cycle;
      j["pose"] = {c.pose.x, c.pose.y, c.pose.heading};
      j["waypoint"] = {c.waypoint.x, c.waypoint.y};
      j["steps"] = c.steps;
      j["distance"] = c.distance;
      j["chosen"] = c.chosen;
      j["actions"] = nlohmann::json::array();
      for (const mos::PlanAction& a : c.actions)
        j["actions"].push_back(
            {{"goal", {a.goal.x, a.goal.y}},
             {"kind", a.kind == mos::ActionKind::Frontier ? "frontier" : "candidate"}});
      j["root"] = nlohmann::json::array();
      for (const mos::ActionStat& s : c.root) j["root"].push_back({{"n", s.n}, {"q", s.q}});
      tr << j.dump() << "\n";
    }
  }

  const std::string text = mos::to_json(result);
  if (!out_path.empty()) write_file(out_path, text + "\n");
  std::cout << text << "\n";
  return 0;
}

int cmd_score(const std::string& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + csv_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto rows = mos::rows_from_csv(text);
  const auto aggregates = mos::aggregate_rows(rows);

  nlohmann::json j;
  for (const auto& [agent, agg] : aggregates)
    j[agent] = {{"episodes", agg.episodes}, {"sr", agg.sr}, {"mspl", agg.mspl}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid-world multi-object search planning toolkit"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  std::string gen_out = "scenarios";
  CLI::App* gen = app.add_subcommand("gen", "generate random scenarios");
  add_gen_options(gen, gen_opts);
  gen->add_option("--out", gen_out, "output directory");

  GenOptions run_gen_opts;
  ParamOptions run_params;
  std::vector<std::string> run_scenarios;
  std::vector<std::string> run_agents;
  int run_jobs = 1;
  bool run_use_gen = false;
  std::string run_csv, run_summary;
  CLI::App* run = app.add_subcommand("run", "run an evaluation batch");
  run->add_option("--scenario", run_scenarios, "scenario file (repeatable)");
  run->add_flag("--gen", run_use_gen, "generate scenarios inline instead of loading");
  add_gen_options(run, run_gen_opts);
  add_param_options(run, run_params);
  run->add_option("--agents", run_agents, "agents to run (default: all)");
  run->add_option("--jobs", run_jobs, "worker threads");
  run->add_option("--out-csv", run_csv, "write per-episode rows here");
  run->add_option("--out-summary", run_summary, "write aggregate JSON here");

  ParamOptions replay_params;
  std::string replay_scenario, replay_agent = "ovamos";
  std::string replay_dump, replay_trace, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "run one episode with full introspection");
  replay->add_option("--scenario", replay_scenario, "scenario file")->required();
  replay->add_option("--agent", replay_agent, "agent kind");
  add_param_options(replay, replay_params);
  replay->add_option("--dump-maps", replay_dump, "write per-cycle value layers (JSONL)");
  replay->add_option("--trace", replay_trace, "write per-cycle planner records (JSONL)");
  replay->add_option("--out", replay_out, "write the episode result JSON here");

  std::string score_csv;
  CLI::App* score = app.add_subcommand("score", "recompute aggregates from a rows CSV");
  score->add_option("--csv", score_csv, "rows CSV produced by run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_opts, gen_out);
    if (run->parsed())
      return cmd_run(run_scenarios, run_gen_opts, run_use_gen, run_agents, run_params,
                     run_jobs, run_csv, run_summary);
    if (replay->parsed())
      return cmd_replay(replay_scenario, replay_agent, replay_params, replay_dump,
                        replay_trace, replay_out);
    if (score->parsed()) return cmd_score(score_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
