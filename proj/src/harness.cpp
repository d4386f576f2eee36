#include "mos/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mos/nav.hpp"
#include "mos/rng.hpp"
#include "mos/sim.hpp"

namespace mos {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string>& class_pool() {
  static const std::vector<std::string> pool = {"cup",  "book", "plant",
                                                "ball", "lamp", "shoe"};
  return pool;
}

struct Layout {
  int w, h;
  std::vector<uint8_t> obstacle;

  void block(int x, int y) { obstacle[size_t(y) * w + x] = 1; }
  bool get(int x, int y) const { return obstacle[size_t(y) * w + x] != 0; }
};

void split_region(Layout& m, Prng& rng, int x0, int y0, int x1, int y1, int depth) {
  // Region is inclusive [x0,x1]x[y0,y1]; walls carve a line with a door.
  const int w = x1 - x0 + 1, h = y1 - y0 + 1;
  if (depth <= 0 || (w < 7 && h < 7)) return;
  const bool vertical = w > h || (w == h && rng.below(2) == 0);
  if (vertical) {
    if (w < 7) return;
    const int wx = x0 + 3 + static_cast<int>(rng.below(static_cast<uint64_t>(w - 6)));
    const int door = y0 + static_cast<int>(rng.below(static_cast<uint64_t>(h - 1)));
    for (int y = y0; y <= y1; ++y)
      if (y != door && y != door + 1) m.block(wx, y);
    split_region(m, rng, x0, y0, wx - 1, y1, depth - 1);
    split_region(m, rng, wx + 1, y0, x1, y1, depth - 1);
  } else {
    if (h < 7) return;
    const int wy = y0 + 3 + static_cast<int>(rng.below(static_cast<uint64_t>(h - 6)));
    const int door = x0 + static_cast<int>(rng.below(static_cast<uint64_t>(w - 1)));
    for (int x = x0; x <= x1; ++x)
      if (x != door && x != door + 1) m.block(x, wy);
    split_region(m, rng, x0, y0, x1, wy - 1, depth - 1);
    split_region(m, rng, x0, wy + 1, x1, y1, depth - 1);
  }
}

std::vector<Cell> largest_free_component(const Layout& m) {
  std::vector<int> comp(size_t(m.w) * m.h, -1);
  std::vector<Cell> best;
  int id = 0;
  for (int sy = 0; sy < m.h; ++sy)
    for (int sx = 0; sx < m.w; ++sx) {
      if (m.get(sx, sy) || comp[size_t(sy) * m.w + sx] >= 0) continue;
      std::vector<Cell> cells;
      std::vector<Cell> stack{{sx, sy}};
      comp[size_t(sy) * m.w + sx] = id;
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        cells.push_back(c);
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int nx = c.x + dx[d], ny = c.y + dy[d];
          if (nx < 0 || nx >= m.w || ny < 0 || ny >= m.h) continue;
          if (m.get(nx, ny) || comp[size_t(ny) * m.w + nx] >= 0) continue;
          comp[size_t(ny) * m.w + nx] = id;
          stack.push_back({nx, ny});
        }
      }
      if (cells.size() > best.size()) best = std::move(cells);
      ++id;
    }
  std::sort(best.begin(), best.end(), CellLess{m.w});
  return best;
}

bool occluded_from(const Layout& m, const Cell& from, const Cell& to) {
  const std::vector<Cell> ray = supercover(from, to);
  for (size_t i = 1; i + 1 < ray.size(); ++i)
    if (m.get(ray[i].x, ray[i].y)) return true;
  return false;
}

Scenario attempt_scenario(const GenSpec& g, uint64_t seed, uint64_t attempt, bool& ok) {
  ok = false;
  Prng rng{seed, stream_tag("generator"), attempt};

  Layout m{g.width, g.height, std::vector<uint8_t>(size_t(g.width) * g.height, 0)};
  for (int x = 0; x < g.width; ++x) {
    m.block(x, 0);
    m.block(x, g.height - 1);
  }
  for (int y = 0; y < g.height; ++y) {
    m.block(0, y);
    m.block(g.width - 1, y);
  }
  split_region(m, rng, 1, 1, g.width - 2, g.height - 2, g.rooms);

  // Furniture: single-cell blocks up to the requested interior density.
  long interior = 0;
  for (int y = 1; y < g.height - 1; ++y)
    for (int x = 1; x < g.width - 1; ++x)
      if (!m.get(x, y)) ++interior;
  long want = static_cast<long>(g.obstacle_density * static_cast<double>(interior));
  // A block needs all eight neighbours free: diagonal contact between
  // obstacles would seal corner gaps the ray-caster cannot see through,
  // leaving permanently unexplorable pockets behind walls.
  auto isolated = [&](int x, int y) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (m.get(x + dx, y + dy)) return false;
    return true;
  };
  for (long tries = 16 * want; want > 0 && tries > 0; --tries) {
    const int x = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(g.width - 4)));
    const int y = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(g.height - 4)));
    if (!isolated(x, y)) continue;
    m.block(x, y);
    --want;
  }

  const std::vector<Cell> comp = largest_free_component(m);
  if (comp.size() < size_t(g.k + 1) * 4) return {};

  const Cell start = comp[rng.below(comp.size())];
  const double min_cells = g.min_target_dist / g.resolution;

  std::vector<Cell> targets;
  auto far_enough = [&](const Cell& c) {
    const double d = std::hypot(double(c.x - start.x), double(c.y - start.y));
    if (d < min_cells) return false;
    for (const Cell& t : targets)
      if (std::hypot(double(c.x - t.x), double(c.y - t.y)) < 2.0) return false;
    return true;
  };
  // First target: prefer a placement the start pose cannot see directly.
  for (int t = 0; t < 200 && targets.empty(); ++t) {
    const Cell c = comp[rng.below(comp.size())];
    if (far_enough(c) && occluded_from(m, start, c)) targets.push_back(c);
  }
  for (int t = 0; t < 400 && static_cast<int>(targets.size()) < g.k; ++t) {
    const Cell c = comp[rng.below(comp.size())];
    if (!(c == start) && far_enough(c)) targets.push_back(c);
  }
  if (static_cast<int>(targets.size()) < g.k) return {};

  Scenario sc;
  sc.grid_width = g.width;
  sc.grid_height = g.height;
  sc.resolution = g.resolution;
  sc.seed = mix64(seed, stream_tag("episode"));
  sc.sensor = g.sensor;
  sc.noise = g.noise;
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x)
      if (m.get(x, y)) sc.obstacles.push_back({x, y});
  for (int i = 0; i < g.k; ++i) {
    sc.target_classes.push_back(class_pool()[i]);
    sc.object_instances.push_back({class_pool()[i], targets[i]});
  }
  // Face the start pose toward open space: a heading into a nearby wall can
  // leave the first frame with no usable frontier at all.
  std::size_t best_seen = 0;
  double best_heading = 0.0;
  for (int h = 0; h < 8; ++h) {
    const double heading = static_cast<double>(h) * kPi / 4.0;
    const std::size_t seen = visible_cells(sc, sc.center_pose(start, heading)).size();
    if (seen > best_seen) {
      best_seen = seen;
      best_heading = heading;
    }
  }
  sc.robot_start = sc.center_pose(start, best_heading);

  // Reachability double-check under the real path rules.
  const OccupancyGrid truth = sc.true_grid();
  for (const Cell& t : targets)
    if (!shortest_path(truth, start, t, false)) return {};

  validate_scenario(sc);
  ok = true;
  return sc;
}

}  // namespace

std::vector<Scenario> generate_scenarios(const GenSpec& spec, int n, uint64_t master_seed) {
  if (spec.k < 1 || spec.k > static_cast<int>(class_pool().size()))
    throw std::invalid_argument("generate_scenarios: k out of range");
  std::vector<Scenario> out;
  for (int i = 0; i < n; ++i) {
    const uint64_t seed = mix64(master_seed, static_cast<uint64_t>(i) + 1);
    bool ok = false;
    Scenario sc;
    for (uint64_t attempt = 0; attempt < 64 && !ok; ++attempt)
      sc = attempt_scenario(spec, seed, attempt, ok);
    if (!ok)
      throw std::runtime_error("generate_scenarios: no feasible layout for scenario " +
                               std::to_string(i) + " (density too high?)");
    out.push_back(std::move(sc));
  }
  return out;
}

double mspl(const std::vector<EpisodeRow>& rows) {
  if (rows.empty()) return 0.0;
  double acc = 0.0;
  for (const EpisodeRow& r : rows) {
    if (r.optimal_m <= 0.0)
      throw std::invalid_argument("mspl: row with non-positive optimal length (agent " +
                                  r.agent + ", scenario " + r.scenario + ")");
    if (r.success) acc += r.optimal_m / std::max(r.path_m, r.optimal_m);
  }
  return acc / static_cast<double>(rows.size());
}

std::map<std::string, AgentAggregate> aggregate_rows(const std::vector<EpisodeRow>& rows) {
  std::map<std::string, std::vector<EpisodeRow>> by_agent;
  for (const EpisodeRow& r : rows) by_agent[r.agent].push_back(r);

  std::map<std::string, AgentAggregate> out;
  for (const auto& [agent, list] : by_agent) {
    AgentAggregate agg;
    agg.episodes = static_cast<int>(list.size());
    for (const EpisodeRow& r : list) agg.sr += r.success;
    agg.sr /= static_cast<double>(list.size());
    agg.mspl = mspl(list);
    if (!(agg.mspl >= 0.0 && agg.mspl <= agg.sr && agg.sr <= 1.0))
      throw std::logic_error("aggregate_rows: bound 0 <= MSPL <= SR <= 1 violated for " +
                             agent);
    out[agent] = agg;
  }
  return out;
}

double scenario_optimal_length(const Scenario& sc) {
  const OccupancyGrid truth = sc.true_grid();
  const Cell start = sc.cell_of(sc.robot_start);

  std::vector<std::vector<Cell>> choices;
  for (const std::string& cls : sc.target_classes) {
    std::vector<Cell> cells;
    for (const ObjectInstance& obj : sc.object_instances)
      if (obj.class_label == cls) cells.push_back(obj.cell);
    choices.push_back(std::move(cells));
  }

  double best = -1.0;
  std::vector<Cell> combo(choices.size());
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == choices.size()) {
      const double len = optimal_tour_length(truth, start, combo);
      if (best < 0.0 || len < best) best = len;
      return;
    }
    for (const Cell& c : choices[i]) {
      combo[i] = c;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return best;
}

BatchResult run_batch(const BatchConfig& config) {
  if (config.scenarios.empty() || config.agents.empty())
    throw std::invalid_argument("run_batch: need at least one scenario and one agent");
  if (config.scenario_names.size() != config.scenarios.size())
    throw std::invalid_argument("run_batch: scenario_names size mismatch");

  const size_t n_sc = config.scenarios.size();
  std::vector<double> optimal(n_sc);
  for (size_t s = 0; s < n_sc; ++s) optimal[s] = scenario_optimal_length(config.scenarios[s]);

  const size_t total = config.agents.size() * n_sc;
  BatchResult result;
  result.rows.resize(total);

  std::atomic<size_t> cursor{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto work = [&]() {
    while (true) {
      const size_t t = cursor.fetch_add(1);
      if (t >= total) return;
      try {
        const size_t a = t / n_sc, s = t % n_sc;
        const Scenario& sc = config.scenarios[s];
        const EpisodeResult ep = run_episode(sc, config.agents[a], config.params);

        EpisodeRow row;
        row.agent = agent_name(config.agents[a]);
        row.scenario = config.scenario_names[s];
        row.seed = sc.seed;
        row.k = static_cast<int>(sc.target_classes.size());
        row.found.assign(sc.target_classes.size(), '0');
        for (const FindEvent& e : ep.events) {
          const auto it = std::find(sc.target_classes.begin(), sc.target_classes.end(),
                                    e.class_label);
          row.found[static_cast<size_t>(it - sc.target_classes.begin())] = '1';
        }
        row.success = ep.success ? 1 : 0;
        row.steps = ep.steps;
        row.cycles = ep.cycles;
        row.path_m = ep.path_length;
        row.optimal_m = optimal[s];
        row.reason = ep.reason;
        result.rows[t] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int jobs = std::max(1, config.jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  result.per_agent = aggregate_rows(result.rows);
  return result;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string rows_to_csv(const std::vector<EpisodeRow>& rows) {
  std::ostringstream out;
  out << "agent,scenario,seed,k,found,success,steps,cycles,path_m,optimal_m,reason\n";
  for (const EpisodeRow& r : rows) {
    out << r.agent << ',' << r.scenario << ',' << r.seed << ',' << r.k << ',' << r.found
        << ',' << r.success << ',' << r.steps << ',' << r.cycles << ',' << fmt_double(r.path_m)
        << ',' << fmt_double(r.optimal_m) << ',' << r.reason << '\n';
  }
  return out.str();
}

std::vector<EpisodeRow> rows_from_csv(const std::string& text) {
  std::vector<EpisodeRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) f.push_back(tok);
    if (f.size() != 11) throw std::invalid_argument("rows_from_csv: bad row: " + line);
    EpisodeRow r;
    r.agent = f[0];
    r.scenario = f[1];
    r.seed = std::stoull(f[2]);
    r.k = std::stoi(f[3]);
    r.found = f[4];
    r.success = std::stoi(f[5]);
    r.steps = std::stol(f[6]);
    r.cycles = std::stol(f[7]);
    r.path_m = std::stod(f[8]);
    r.optimal_m = std::stod(f[9]);
    r.reason = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary_json(const BatchResult& result, const BatchConfig& config) {
  nlohmann::json j;
  j["version"] = "0.1.0";
  j["episodes"] = result.rows.size();
  j["scenarios"] = config.scenarios.size();
  j["jobs"] = config.jobs;
  j["agents"] = nlohmann::json::array();
  for (AgentKind k : config.agents) j["agents"].push_back(agent_name(k));

  const EpisodeParams& p = config.params;
  j["params"] = {
      {"decay_tau", p.decay.tau},
      {"decay_kappa", p.decay.kappa},
      {"cluster_eps", p.cluster.eps},
      {"cluster_min_pts", p.cluster.min_pts},
      {"value_threshold", p.cluster.value_threshold},
      {"lambda_move", p.planner.lambda_move},
      {"lambda_frontier", p.planner.lambda_frontier},
      {"lambda_target", p.planner.lambda_target},
      {"gamma", p.planner.gamma},
      {"delta", p.planner.delta},
      {"beta", p.planner.beta},
      {"depth", p.planner.depth},
      {"n_sims", p.planner.n_sims},
      {"c_ucb", p.planner.c_ucb},
      {"min_frontier_len", p.min_frontier_len},
      {"step_budget", p.step_budget},
      {"cycle_cap", p.cycle_cap},
  };
  j["results"] = nlohmann::json::object();
  for (const auto& [agent, agg] : result.per_agent)
    j["results"][agent] = {
        {"episodes", agg.episodes}, {"sr", agg.sr}, {"mspl", agg.mspl}};
  return j.dump(2) + "\n";
}

}  // namespace mos
