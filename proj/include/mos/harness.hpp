#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mos/agents.hpp"
#include "mos/scenario.hpp"

namespace mos {

// Parameters for the random indoor-layout generator. The sensor and noise
// defaults here differ from the SensorSpec/NoiseSpec type defaults: they
// are calibrated so a 500-step budget is tight but sufficient on a 40x40
// desk-scale map, and so the value signal is informative but imperfect --
// a wide short-range camera plus a slightly noisy scorer, which is the
// regime where hedging across candidates pays off over chasing the
// current maximum.
struct GenSpec {
  int width = 40;
  int height = 40;
  double resolution = 0.25;      // meters per cell
  int k = 3;                     // number of target classes, <= 6
  double obstacle_density = 0.06;  // furniture fill fraction of interior
  int rooms = 2;                 // wall-splitting passes
  double min_target_dist = 4.0;  // meters from start, Euclidean
  SensorSpec sensor{3.141592653589793, 3.0, 2.0, 0.3};
  NoiseSpec noise{2.0, 0.05, 0.1};
};

// Deterministic in (spec, n, master_seed); every scenario is validated,
// every target reachable, and at least one target occluded from the
// start pose when the layout allows it.
std::vector<Scenario> generate_scenarios(const GenSpec& spec, int n, uint64_t master_seed);

struct EpisodeRow {
  std::string agent;
  std::string scenario;
  uint64_t seed = 0;
  int k = 0;
  std::string found;  // per-class flags in target order, e.g. "101"
  int success = 0;    // S_i: every class found
  long steps = 0;
  long cycles = 0;
  double path_m = 0.0;     // p_i
  double optimal_m = 0.0;  // l_i
  std::string reason;
};

struct AgentAggregate {
  int episodes = 0;
  double sr = 0.0;
  double mspl = 0.0;
};

struct BatchConfig {
  std::vector<Scenario> scenarios;
  std::vector<std::string> scenario_names;  // same length; used in rows
  std::vector<AgentKind> agents;
  EpisodeParams params;
  int jobs = 1;
};

struct BatchResult {
  std::vector<EpisodeRow> rows;  // agent-major, scenario order within
  std::map<std::string, AgentAggregate> per_agent;
};

// (1/N) sum S_i * l_i / max(p_i, l_i). Throws on l_i <= 0.
double mspl(const std::vector<EpisodeRow>& rows);

// Success-weighted aggregates per agent; asserts 0 <= MSPL <= SR <= 1.
std::map<std::string, AgentAggregate> aggregate_rows(const std::vector<EpisodeRow>& rows);

// Best achievable tour length: shortest visit of one instance of every
// target class, minimized over instance choices and visit orders.
double scenario_optimal_length(const Scenario& sc);

// Runs every (agent, scenario) pair on a worker pool. Row order and
// content are independent of the parallelism degree.
BatchResult run_batch(const BatchConfig& config);

std::string rows_to_csv(const std::vector<EpisodeRow>& rows);
std::vector<EpisodeRow> rows_from_csv(const std::string& text);

// Aggregates + config echo as a JSON document.
std::string summary_json(const BatchResult& result, const BatchConfig& config);

}  // namespace mos
