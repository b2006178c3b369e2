#pragma once

#include <vector>

#include "tamp/core/rng.hpp"
#include "tamp/kin/robot_spec.hpp"

namespace tamp::kin {

struct FkResult {
  Pose ee;                      // world pose of the last DH frame
  std::vector<Pose> link_poses; // world pose of DH frame i+1, one per joint
};

FkResult forward_kinematics(const RobotSpec& spec, const JointConfig& q);

// End-effector pose only; avoids building the per-link vector.
Pose fk_ee(const RobotSpec& spec, const JointConfig& q);

// Geometric Jacobian of the end effector, rows = [linear; angular], one column
// per revolute joint.
Eigen::MatrixXd jacobian(const RobotSpec& spec, const JointConfig& q);

struct IkOptions {
  double damping = 1e-2;
  int max_iterations = 200;
  int max_restarts = 20;
  double pos_tolerance = 1e-3;  // m
  double rot_tolerance = 1e-2;  // rad
  double max_step = 0.5;        // per-iteration joint step clamp (rad)
};

struct IkResult {
  bool success = false;
  JointConfig q;
  double pos_residual = 0.0;
  double rot_residual = 0.0;
  int restarts_used = 0;
};

// Damped least squares with uniform random restarts inside the joint limits.
IkResult inverse_kinematics(const RobotSpec& spec, const Pose& target,
                            const JointConfig& seed, Rng& rng,
                            const IkOptions& opts = {});

// Ratio of extreme eigenvalues of J_pos * J_pos^T (squared singular values of
// the positional Jacobian). Returns +inf when the smallest eigenvalue drops
// below 1e-12. full_twist switches to the 6-row Jacobian.
double manipulability_condition(const RobotSpec& spec, const JointConfig& q,
                                bool full_twist = false);

// 6-D pose error target - current as [translation; rotation-vector].
Eigen::Matrix<double, 6, 1> pose_error(const Pose& target, const Pose& current);

}  // namespace tamp::kin
