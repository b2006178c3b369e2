#pragma once

#include "tamp/core/rng.hpp"
#include "tamp/gmm/tpgmm.hpp"

namespace tamp::exec {

// Task-aligned frames: rotation takes x to the start->goal direction, origins
// at the respective task points. The same convention is used when generating
// demonstrations and when adapting a model to a new task, so learned detour
// shapes rotate with the task.
gmm::TaskFrames make_task_frames(const Vec3& start, const Vec3& goal,
                                 const Vec3& obstacle);

struct DemoGenParams {
  double detour_clearance = 0.15;  // minimum obstacle clearance (m)
  double noise_sigma = 0.01;       // per-demo smooth perturbation (m)
  bool clustered = true;           // concentrate samples at stations
  int stations = 5;                // station count along the curve
};

struct DemonstrationSet {
  std::vector<gmm::Demonstration> demos;
  int demo_count = 0;
  int samples_per_demo = 0;
  DemoGenParams params;
};

// Minimum-jerk start->goal baseline with a smooth detour bump away from the
// obstacle, plus per-demo smooth perturbations. Every demo starts/ends
// exactly on the start/goal positions and clears the obstacle by at least
// params.detour_clearance. DegenerateInput when start == goal or when an
// endpoint sits inside the clearance radius of the obstacle.
DemonstrationSet generate_demonstrations(const Pose& start, const Pose& goal,
                                         const Pose& obstacle, int demo_count,
                                         int samples, uint64_t seed,
                                         const DemoGenParams& params = {});

// Training corpus for one robot/phase: demonstrations across randomized task
// placements inside the given zones (so the model generalizes over frames).
DemonstrationSet make_training_set(const Vec3& start_zone_center,
                                   const Vec3& goal_zone_center,
                                   double zone_radius, int demo_count,
                                   int samples, uint64_t seed,
                                   const DemoGenParams& params = {});

}  // namespace tamp::exec
