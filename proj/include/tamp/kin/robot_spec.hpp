#pragma once

#include <string>
#include <vector>

#include "tamp/core/pose.hpp"
#include "tamp/sched/tool_type.hpp"

namespace tamp::kin {

// Standard DH row: rotZ(theta + theta_offset) * transZ(d) * transX(a) * rotX(alpha).
struct DhParam {
  double a = 0.0;             // link length (m)
  double alpha = 0.0;         // link twist (rad)
  double d = 0.0;             // link offset (m)
  double theta_offset = 0.0;  // joint variable offset (rad)
};

// Capsule in a link's local DH frame.
struct CapsuleSpec {
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  double radius = 0.05;
};

struct JointLimit {
  double min = 0.0;
  double max = 0.0;
};

struct RobotSpec {
  std::string name;
  Pose base_pose;
  std::vector<DhParam> dh_params;
  std::vector<JointLimit> joint_limits;
  std::vector<double> velocity_limits;      // rad/s
  std::vector<double> acceleration_limits;  // rad/s^2
  sched::ToolType tool = sched::ToolType::kThreeFingerGripper;
  // link_capsules[i] holds the collision capsules attached to DH frame i+1.
  std::vector<std::vector<CapsuleSpec>> link_capsules;
  Pose drop_zone;  // place target for carried objects

  std::size_t dof() const { return dh_params.size(); }
};

using JointConfig = Eigen::VectorXd;

bool within_limits(const RobotSpec& spec, const JointConfig& q, double tol = 1e-9);
JointConfig clamp_to_limits(const RobotSpec& spec, const JointConfig& q);

}  // namespace tamp::kin
