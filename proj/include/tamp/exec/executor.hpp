#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "tamp/exec/report.hpp"
#include "tamp/gmm/tpgmm.hpp"
#include "tamp/plan/rrt_connect.hpp"
#include "tamp/plan/types.hpp"
#include "tamp/sched/scheduler.hpp"
#include "tamp/world/swept.hpp"

namespace tamp::exec {

// Four benchmark models: (robot index, phase) -> TP-GMM.
struct ModelSet {
  std::map<std::pair<int, std::string>, gmm::TpgmmModel> models;

  const gmm::TpgmmModel* find(int robot, const std::string& phase) const {
    const auto it = models.find({robot, phase});
    return it == models.end() ? nullptr : &it->second;
  }
};

enum class PlannerKind { kDefault, kGmmInformed };

struct ExecOptions {
  PlannerKind planner = PlannerKind::kDefault;
  const ModelSet* models = nullptr;  // required for kGmmInformed
  uint64_t run_seed = 0;             // forked per trial by callers
  double tick_dt = 0.05;             // control tick (s, simulated)
  double sim_timeout_s = 600.0;
  double plan_timeout_s = 1.5;       // per-plan budget (deterministic units)
  double step_size = 0.1;            // rad
  int shortcut_iterations = 100;
  // Preferred planning clearance; nominal paths stay out of the steering
  // band. Falls back to d_min when no such path exists. < 0: epsilon + 0.01.
  double plan_clearance = -1.0;
  // Simulated time charged per planning episode (reproduction overhead makes
  // the informed planner slightly more expensive).
  double plan_cost_default_s = 0.5;
  double plan_cost_informed_s = 0.75;
  double grasp_dwell_s = 0.5;
  bool record_swept = true;
  bool record_deviation = false;  // fill RobotReport::deviation per robot
  int max_task_attempts = 3;
  sched::DetectionNoise detection_noise;
};

struct ExecTask {
  enum class Kind { kPickPlace, kReach };
  Kind kind = Kind::kPickPlace;
  sched::TaskObject object;  // kPickPlace
  Pose reach_target;         // kReach
};

// Dual-robot simulation loop: detect -> schedule -> plan -> execute with
// per-tick margin monitoring and active avoidance, replanning until all tasks
// are done. Deterministic for a given (scenario, options, seed).
class Executor {
public:
  Executor(const Scenario& scenario, const ExecOptions& options);
  ~Executor();

  // Case-study hooks: direct task injection and scripted joint motion.
  void set_tasks(int robot, std::vector<ExecTask> tasks);
  void set_scripted_motion(int robot, const plan::Trajectory& loop);
  void set_initial_payload(int robot, double radius);

  // Scheduler pipeline over the scenario's ground-truth objects.
  void schedule_from_detections();

  RunReport run();

  const EventLog& log() const;
  // Executed end-effector trace per robot (filled during run()).
  const std::vector<Vec3>& ee_trace(int robot) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunReport run_disassembly(const Scenario& scenario, const ExecOptions& options,
                          EventLog* log_out = nullptr);

// Reference trajectory for deviation analysis: first collision-free plan in
// an obstacle-free copy of the scene (default planner, heavy smoothing,
// seeded by the scenario seed only).
plan::Trajectory reference_trajectory(const Scenario& scenario, int robot,
                                      const kin::JointConfig& start,
                                      const Pose& target);

// Both paths arc-length normalized to [0,1]; deviation sampled at 100 points.
std::vector<double> deviation_series(const std::vector<Vec3>& executed,
                                     const std::vector<Vec3>& reference);

}  // namespace tamp::exec
