#pragma once

#include <cstdint>
#include <string>

#include "tamp/core/rng.hpp"
#include "tamp/plan/types.hpp"
#include "tamp/plan/validity.hpp"

namespace tamp::plan {

// Planner "time" is a deterministic iteration budget (timeout_s * this rate)
// so identical seeds replay bit-identically; wall time is reported only.
inline constexpr double kIterationsPerSecond = 20000.0;

struct PlanRequest {
  const kin::RobotSpec* robot = nullptr;
  kin::JointConfig start;
  Pose goal_pose;
  const gmm::RegionQ* region = nullptr;  // informed mode when set
  const ValidityContext* validity = nullptr;
  double step_size = 0.1;  // rad, max-norm per extension
  double timeout_s = 5.0;
  uint64_t seed = 0;
};

enum class PlanStatus {
  kSuccess,
  kIkFailure,
  kInvalidStart,
  kRegionInfeasible,  // start or goal violates the region constraint
  kTimeout,
};

struct PlanStats {
  int iterations = 0;
  std::size_t start_tree_size = 0;
  std::size_t goal_tree_size = 0;
  uint64_t sampler_starvations = 0;
  int goal_roots = 1;
};

struct PlanResult {
  PlanStatus status = PlanStatus::kTimeout;
  Path path;
  PlanStats stats;
  kin::IkResult ik;  // best IK outcome (residuals reported on failure)

  bool ok() const { return status == PlanStatus::kSuccess; }
};

std::string to_string(PlanStatus s);

// Bidirectional RRT with connect heuristic. With a region set, samples are
// rejection-filtered and every tree waypoint must keep its end effector
// inside the region; interpolated sub-steps are margin-checked only.
PlanResult plan_rrt_connect(const PlanRequest& req);

// Independent pass re-checking the Path invariants (step bound, margins,
// region membership) along a returned path. Used by tests and the executor;
// deliberately not shared with the planner's internal checks.
bool revalidate_path(const Path& path, const ValidityContext& validity,
                     double step_size, const gmm::RegionQ* region);

}  // namespace tamp::plan
