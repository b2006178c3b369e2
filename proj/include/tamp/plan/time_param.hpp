#pragma once

#include "tamp/plan/types.hpp"

namespace tamp::plan {

// Per-segment trapezoidal profile under the robot's velocity/acceleration
// limits, synchronized across joints via a shared normalized profile.
Trajectory time_parameterize(const Path& path, const kin::RobotSpec& spec,
                             double dt = 0.02);

// Closed-form duration of one rest-to-rest trapezoid move.
double trapezoid_duration(double distance, double v_max, double a_max);

}  // namespace tamp::plan
