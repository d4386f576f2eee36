#include "mos/planner.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mos {

double euclid_m(const Cell& a, const Cell& b, double resolution) {
  return std::hypot(static_cast<double>(a.x - b.x), static_cast<double>(a.y - b.y)) *
         resolution;
}

double observation_prob(const Cell& robot_after, const Cell& target, const PlannerModel& m) {
  const double d = euclid_m(robot_after, target, m.resolution);
  return d <= m.delta ? 1.0 : std::exp(-m.beta * (d - m.delta));
}

double reward(const Cell& robot_before, const Cell& robot_after, const Cell& target,
              const PlanAction& a, const PlannerModel& m) {
  double r = -m.lambda_move * euclid_m(robot_before, robot_after, m.resolution);
  if (a.kind == ActionKind::Frontier) r += m.lambda_frontier;
  if (euclid_m(robot_after, target, m.resolution) <= m.delta) r += m.lambda_target;
  return r;
}

GenResult generative_step(const PlanState& s, const PlanAction& a, const PlannerModel& m,
                          Prng& rng) {
  GenResult g;
  g.state = PlanState{a.goal, s.target};
  g.obs = rng.bernoulli(observation_prob(a.goal, s.target, m)) ? 1 : 0;
  g.reward = reward(s.robot, a.goal, s.target, a, m);
  return g;
}

namespace {

struct Node {
  long n = 0;
  std::vector<ActionStat> arms;
  std::vector<std::array<int, 2>> child;  // [action][observation] -> node index

  explicit Node(size_t n_actions) : arms(n_actions), child(n_actions, {-1, -1}) {}
};

class Tree {
 public:
  Tree(const std::vector<PlanAction>& actions, const PlannerModel& m, Prng& rng)
      : actions_(actions), m_(m), rng_(rng) {
    nodes_.emplace_back(actions.size());
  }

  void simulate(const PlanState& root_state) {
    PlanState s = root_state;
    path_.clear();
    int node = 0, depth = m_.depth;
    double tail = 0.0;  // rollout value, discounted to the leaf

    while (depth > 0) {
      const int a = select(node);
      const GenResult g = generative_step(s, actions_[a], m_, rng_);
      path_.push_back({node, a, g.reward});
      s = g.state;
      --depth;
      int& next = nodes_[node].child[a][g.obs];
      if (next < 0) {
        next = static_cast<int>(nodes_.size());
        nodes_.emplace_back(actions_.size());
        tail = rollout(s, depth);
        break;
      }
      node = next;
    }

    // Backup: fold rewards from the leaf upward with discounting.
    double ret = tail;
    for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
      ret = it->r + m_.gamma * ret;
      Node& nd = nodes_[it->node];
      nd.n += 1;
      ActionStat& arm = nd.arms[it->action];
      arm.n += 1;
      arm.q += (ret - arm.q) / static_cast<double>(arm.n);
    }
  }

  const Node& root() const { return nodes_.front(); }

 private:
  int select(int node) const {
    const Node& nd = nodes_[node];
    for (size_t a = 0; a < nd.arms.size(); ++a)
      if (nd.arms[a].n == 0) return static_cast<int>(a);
    int best = 0;
    double best_v = 0.0;
    const double ln_n = std::log(static_cast<double>(nd.n));
    for (size_t a = 0; a < nd.arms.size(); ++a) {
      const double v =
          nd.arms[a].q + m_.c_ucb * std::sqrt(ln_n / static_cast<double>(nd.arms[a].n));
      if (a == 0 || v > best_v) {
        best = static_cast<int>(a);
        best_v = v;
      }
    }
    return best;
  }

  double rollout(PlanState s, int depth) {
    double ret = 0.0, disc = 1.0;
    for (int t = 0; t < depth; ++t) {
      const PlanAction& a = actions_[rng_.below(actions_.size())];
      const GenResult g = generative_step(s, a, m_, rng_);
      ret += disc * g.reward;
      disc *= m_.gamma;
      s = g.state;
    }
    return ret;
  }

  struct Visit {
    int node;
    int action;
    double r;
  };

  const std::vector<PlanAction>& actions_;
  const PlannerModel& m_;
  Prng& rng_;
  std::vector<Node> nodes_;
  std::vector<Visit> path_;
};

Cell sample_target(const CandidateSet& belief, Prng& rng) {
  if (belief.points.empty()) return *belief.frontier;
  const double u = rng.uniform01();
  double acc = 0.0;
  for (size_t i = 0; i < belief.points.size(); ++i) {
    acc += belief.probs[i];
    if (u < acc) return belief.points[i];
  }
  return belief.points.back();
}

}  // namespace

PlanResult pouct_plan(const CandidateSet& belief, const Cell& robot,
                      const std::vector<PlanAction>& actions, const PlannerModel& m,
                      Prng& rng) {
  if (actions.empty()) throw std::invalid_argument("pouct_plan: empty action set");
  if (belief.points.empty() && !belief.frontier)
    throw std::invalid_argument("pouct_plan: empty belief");

  Tree tree(actions, m, rng);
  for (int i = 0; i < m.n_sims; ++i)
    tree.simulate(PlanState{robot, sample_target(belief, rng)});

  const Node& root = tree.root();
  PlanResult res;
  res.root = root.arms;
  res.chosen = 0;
  for (size_t a = 1; a < root.arms.size(); ++a)
    if (root.arms[a].q > root.arms[res.chosen].q) res.chosen = static_cast<int>(a);
  return res;
}

}  // namespace mos
