#pragma once

#include <ostream>
#include <vector>

#include "tamp/plan/types.hpp"

namespace tamp::plan {

// Cumulative Euclidean end-effector distance over consecutive samples.
double ee_path_length(const kin::RobotSpec& spec, const Trajectory& traj);

// End-effector positions per trajectory sample.
std::vector<Vec3> ee_trace(const kin::RobotSpec& spec, const Trajectory& traj);

// CSV rows: t, q1..qn, x, y, z.
void export_trajectory_csv(const kin::RobotSpec& spec, const Trajectory& traj,
                           std::ostream& os);

}  // namespace tamp::plan
