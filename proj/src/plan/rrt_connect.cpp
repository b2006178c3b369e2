#include "tamp/plan/rrt_connect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tamp/plan/sampler.hpp"

namespace tamp::plan {

std::string to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::kSuccess: return "success";
    case PlanStatus::kIkFailure: return "ik-failure";
    case PlanStatus::kInvalidStart: return "invalid-start";
    case PlanStatus::kRegionInfeasible: return "region-infeasible";
    case PlanStatus::kTimeout: return "planning-failure";
  }
  return "unknown";
}

namespace {

struct Tree {
  std::vector<kin::JointConfig> nodes;
  std::vector<int> parents;

  int add(const kin::JointConfig& q, int parent) {
    nodes.push_back(q);
    parents.push_back(parent);
    return static_cast<int>(nodes.size()) - 1;
  }

  int nearest(const kin::JointConfig& q) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = (nodes[i] - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  std::vector<kin::JointConfig> branch_to_root(int idx) const {
    std::vector<kin::JointConfig> out;
    for (int i = idx; i >= 0; i = parents[static_cast<std::size_t>(i)]) {
      out.push_back(nodes[static_cast<std::size_t>(i)]);
    }
    return out;
  }
};

enum class ExtendOutcome { kTrapped, kAdvanced, kReached };

struct Extender {
  const PlanRequest* req;
  const ValidityContext* validity;

  // One step from the nearest node toward q_target, capped at step_size in
  // max-norm. New waypoints must pass the full state check (margins + region).
  ExtendOutcome extend(Tree& tree, const kin::JointConfig& q_target,
                       int* new_index) const {
    const int near = tree.nearest(q_target);
    const kin::JointConfig& q_near = tree.nodes[static_cast<std::size_t>(near)];
    const kin::JointConfig delta = q_target - q_near;
    const double span = delta.lpNorm<Eigen::Infinity>();
    kin::JointConfig q_new;
    bool reached = false;
    if (span <= req->step_size) {
      q_new = q_target;
      reached = true;
    } else {
      q_new = q_near + (req->step_size / span) * delta;
    }
    if (!validity->state_valid(q_new)) return ExtendOutcome::kTrapped;
    if (!validity->edge_valid(q_near, q_new, req->step_size / 4.0)) {
      return ExtendOutcome::kTrapped;
    }
    const int idx = tree.add(q_new, near);
    if (new_index) *new_index = idx;
    return reached ? ExtendOutcome::kReached : ExtendOutcome::kAdvanced;
  }

  // Greedy connect: keep stepping toward q until trapped or reached.
  ExtendOutcome connect(Tree& tree, const kin::JointConfig& q,
                        int* last_index) const {
    ExtendOutcome out = ExtendOutcome::kTrapped;
    int guard = 0;
    do {
      out = extend(tree, q, last_index);
      if (++guard > 10000) return ExtendOutcome::kTrapped;
    } while (out == ExtendOutcome::kAdvanced);
    return out;
  }
};

Path assemble(const Tree& start_tree, int start_leaf, const Tree& goal_tree,
              int goal_leaf) {
  Path path;
  std::vector<kin::JointConfig> head = start_tree.branch_to_root(start_leaf);
  std::reverse(head.begin(), head.end());
  std::vector<kin::JointConfig> tail = goal_tree.branch_to_root(goal_leaf);
  path.waypoints = std::move(head);
  for (const auto& q : tail) {
    if (!path.waypoints.empty() &&
        (path.waypoints.back() - q).lpNorm<Eigen::Infinity>() < 1e-12) {
      continue;  // junction duplicate
    }
    path.waypoints.push_back(q);
  }
  return path;
}

}  // namespace

PlanResult plan_rrt_connect(const PlanRequest& req) {
  PlanResult res;
  const kin::RobotSpec& spec = *req.robot;
  const ValidityContext& validity = *req.validity;
  Rng rng(req.seed);

  if (!validity.state_valid(req.start)) {
    // Distinguish a region violation at the start from a margin violation.
    if (req.region != nullptr && validity.margins_ok(req.start) &&
        !req.region->contains(kin::fk_ee(spec, req.start).translation)) {
      res.status = PlanStatus::kRegionInfeasible;
    } else {
      res.status = PlanStatus::kInvalidStart;
    }
    return res;
  }

  // Trivial connect: the goal pose is already reached.
  {
    const Pose ee = kin::fk_ee(spec, req.start);
    if (translation_distance(ee, req.goal_pose) < 1e-3 &&
        rotation_distance(ee, req.goal_pose) < 1e-2) {
      res.status = PlanStatus::kSuccess;
      res.path.waypoints = {req.start};
      res.ik.success = true;
      res.ik.q = req.start;
      return res;
    }
  }

  res.ik = kin::inverse_kinematics(spec, req.goal_pose, req.start, rng);
  if (!res.ik.success) {
    res.status = PlanStatus::kIkFailure;
    return res;
  }
  if (req.region != nullptr &&
      !req.region->contains(kin::fk_ee(spec, res.ik.q).translation)) {
    res.status = PlanStatus::kRegionInfeasible;
    return res;
  }

  Tree start_tree, goal_tree;
  start_tree.add(req.start, -1);
  goal_tree.add(res.ik.q, -1);

  std::optional<InformedSampler> informed;
  if (req.region != nullptr) informed.emplace(spec, *req.region);
  const int budget =
      std::max(1, static_cast<int>(req.timeout_s * kIterationsPerSecond));
  Extender ext{&req, &validity};

  Tree* ta = &start_tree;
  Tree* tb = &goal_tree;
  bool a_is_start = true;

  for (int iter = 0; iter < budget; ++iter) {
    res.stats.iterations = iter + 1;

    // Late goal-root widening: add alternative IK solutions if the first
    // root has not connected by half the budget.
    if (iter == budget / 2 && res.stats.goal_roots == 1) {
      for (int extra = 0; extra < 4; ++extra) {
        kin::IkResult alt = kin::inverse_kinematics(
            spec, req.goal_pose, uniform_sample(spec, rng), rng);
        if (!alt.success || !validity.state_valid(alt.q)) continue;
        if (req.region != nullptr &&
            !req.region->contains(kin::fk_ee(spec, alt.q).translation)) {
          continue;
        }
        goal_tree.add(alt.q, -1);
        ++res.stats.goal_roots;
      }
    }

    kin::JointConfig q_rand;
    if (informed) {
      auto drawn = informed->sample(rng);
      q_rand = drawn ? *drawn : uniform_sample(spec, rng);
    } else {
      q_rand = uniform_sample(spec, rng);
    }

    int a_new = -1;
    if (ext.extend(*ta, q_rand, &a_new) != ExtendOutcome::kTrapped) {
      int b_new = -1;
      if (ext.connect(*tb, ta->nodes[static_cast<std::size_t>(a_new)], &b_new) ==
          ExtendOutcome::kReached) {
        res.status = PlanStatus::kSuccess;
        res.path = a_is_start ? assemble(*ta, a_new, *tb, b_new)
                              : assemble(*tb, b_new, *ta, a_new);
        res.stats.start_tree_size = start_tree.nodes.size();
        res.stats.goal_tree_size = goal_tree.nodes.size();
        if (informed) {
          res.stats.sampler_starvations = informed->stats().starvations;
        }
        return res;
      }
    }
    std::swap(ta, tb);
    a_is_start = !a_is_start;
  }

  res.status = PlanStatus::kTimeout;
  res.stats.start_tree_size = start_tree.nodes.size();
  res.stats.goal_tree_size = goal_tree.nodes.size();
  if (informed) {
    res.stats.sampler_starvations = informed->stats().starvations;
  }
  return res;
}

bool revalidate_path(const Path& path, const ValidityContext& validity,
                     double step_size, const gmm::RegionQ* region) {
  if (path.waypoints.empty()) return false;
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const auto& q = path.waypoints[i];
    std::vector<world::NearCollision> contacts;
    if (validity.total_margin_at(q) < validity.safety().d_min) return false;
    if (region != nullptr &&
        !region->contains(
            kin::fk_ee(validity.robot(), q).translation)) {
      return false;
    }
    if (i == 0) continue;
    const auto& prev = path.waypoints[i - 1];
    if ((q - prev).lpNorm<Eigen::Infinity>() > step_size + 1e-9) return false;
    // Sub-steps at a quarter of the step bound.
    const double span = (q - prev).lpNorm<Eigen::Infinity>();
    const int steps = std::max(1, static_cast<int>(std::ceil(span / (step_size / 4.0))));
    for (int s = 1; s < steps; ++s) {
      const double u = static_cast<double>(s) / steps;
      const kin::JointConfig mid = prev + u * (q - prev);
      if (validity.total_margin_at(mid) < validity.safety().d_min) return false;
    }
  }
  return true;
}

}  // namespace tamp::plan
