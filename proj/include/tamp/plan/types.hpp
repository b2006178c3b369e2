#pragma once

#include <vector>

#include "tamp/kin/kinematics.hpp"

namespace tamp::plan {

struct Path {
  std::vector<kin::JointConfig> waypoints;

  double joint_length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      len += (waypoints[i] - waypoints[i - 1]).norm();
    }
    return len;
  }
};

struct TrajectorySample {
  double t = 0.0;
  kin::JointConfig q;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;

  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }

  // Linear interpolation between samples; clamped at the ends.
  kin::JointConfig config_at(double t) const;
};

}  // namespace tamp::plan
