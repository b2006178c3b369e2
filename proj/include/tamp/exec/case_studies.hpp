#pragma once

#include <array>

#include "tamp/exec/executor.hpp"

namespace tamp::exec {

// Bundled synthetic scenes. I: crossing reach targets (robot-robot
// interaction), II: scripted disturbance arm + transport task, III: six-object
// disassembly. Geometry respects the declared workspace bounds and keeps
// grasp approaches outside the near-collision band of non-target bodies.
Scenario make_case1_scenario(uint64_t seed);
Scenario make_case2_scenario(uint64_t seed);
Scenario make_case3_scenario(uint64_t seed);

// Per-seed variation of a disassembly scene: object and obstacle positions
// jittered inside their zones, minimum spacing preserved.
Scenario randomize_scenario(const Scenario& base, uint64_t seed);

// Crossing reach targets used by Case I (one per robot).
std::array<Pose, 2> case1_targets(const Scenario& s);

// Trains the four benchmark models (robot x pick/place) on synthetic
// demonstration sets whose task placements bracket the scene geometry.
ModelSet fit_benchmark_models(const Scenario& s, uint64_t seed, int k = 5);

// Training zone pairs (start center, goal center) derived from the scene.
std::array<std::pair<Vec3, Vec3>, 2> pick_zones(const Scenario& s);
std::array<std::pair<Vec3, Vec3>, 2> place_zones(const Scenario& s);

struct CaseRun {
  RunReport report;
  // Per robot: deviation series vs the obstacle-free reference.
  std::array<std::vector<double>, 2> deviations;
};

// Case I driver: both robots run their crossing reach task with deviation
// recording enabled.
CaseRun run_case1(const Scenario& s, const ExecOptions& opt);

// Case II driver: robot 0 executes a scripted loop with an attached payload,
// robot 1 runs its transport task.
CaseRun run_case2(const Scenario& s, const ExecOptions& opt, EventLog* log_out = nullptr);

}  // namespace tamp::exec
