#include "tamp/kin/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tamp::kin {

bool within_limits(const RobotSpec& spec, const JointConfig& q, double tol) {
  for (int i = 0; i < q.size(); ++i) {
    const auto& lim = spec.joint_limits[static_cast<std::size_t>(i)];
    if (q[i] < lim.min - tol || q[i] > lim.max + tol) return false;
  }
  return true;
}

JointConfig clamp_to_limits(const RobotSpec& spec, const JointConfig& q) {
  JointConfig out = q;
  for (int i = 0; i < q.size(); ++i) {
    const auto& lim = spec.joint_limits[static_cast<std::size_t>(i)];
    out[i] = std::clamp(out[i], lim.min, lim.max);
  }
  return out;
}

namespace {

inline Pose dh_transform(const DhParam& p, double theta) {
  const double th = theta + p.theta_offset;
  const Quat q = Quat(Eigen::AngleAxisd(th, Vec3::UnitZ())) *
                 Quat(Eigen::AngleAxisd(p.alpha, Vec3::UnitX()));
  // Joint origin after rotZ(th) * transZ(d) * transX(a).
  const Vec3 t(p.a * std::cos(th), p.a * std::sin(th), p.d);
  return Pose(q, t);
}

}  // namespace

FkResult forward_kinematics(const RobotSpec& spec, const JointConfig& q) {
  FkResult out;
  out.link_poses.reserve(spec.dof());
  Pose cur = spec.base_pose;
  for (std::size_t i = 0; i < spec.dof(); ++i) {
    cur = compose(cur, dh_transform(spec.dh_params[i], q[static_cast<int>(i)]));
    out.link_poses.push_back(cur);
  }
  out.ee = cur;
  return out;
}

Pose fk_ee(const RobotSpec& spec, const JointConfig& q) {
  Pose cur = spec.base_pose;
  for (std::size_t i = 0; i < spec.dof(); ++i) {
    cur = compose(cur, dh_transform(spec.dh_params[i], q[static_cast<int>(i)]));
  }
  return cur;
}

Eigen::MatrixXd jacobian(const RobotSpec& spec, const JointConfig& q) {
  const std::size_t n = spec.dof();
  Eigen::MatrixXd J(6, static_cast<int>(n));
  // Joint axes are the z axes of the frames *before* each joint transform.
  Pose cur = spec.base_pose;
  std::vector<Vec3> origins(n + 1);
  std::vector<Vec3> z_axes(n + 1);
  origins[0] = cur.translation;
  z_axes[0] = cur.rotation * Vec3::UnitZ();
  for (std::size_t i = 0; i < n; ++i) {
    cur = compose(cur, dh_transform(spec.dh_params[i], q[static_cast<int>(i)]));
    origins[i + 1] = cur.translation;
    z_axes[i + 1] = cur.rotation * Vec3::UnitZ();
  }
  const Vec3 p_ee = origins[n];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 lin = z_axes[i].cross(p_ee - origins[i]);
    J.block<3, 1>(0, static_cast<int>(i)) = lin;
    J.block<3, 1>(3, static_cast<int>(i)) = z_axes[i];
  }
  return J;
}

Eigen::Matrix<double, 6, 1> pose_error(const Pose& target, const Pose& current) {
  Eigen::Matrix<double, 6, 1> e;
  e.head<3>() = target.translation - current.translation;
  const Quat dq = target.rotation * current.rotation.conjugate();
  Eigen::AngleAxisd aa(dq);
  double angle = aa.angle();
  Vec3 axis = aa.axis();
  if (angle > std::numbers::pi) {  // take the short way around
    angle = 2.0 * std::numbers::pi - angle;
    axis = -axis;
  }
  e.tail<3>() = angle * axis;
  return e;
}

namespace {

IkResult ik_attempt(const RobotSpec& spec, const Pose& target,
                    const JointConfig& start, const IkOptions& opts) {
  IkResult res;
  res.q = clamp_to_limits(spec, start);
  const int n = static_cast<int>(spec.dof());
  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    const Pose cur = fk_ee(spec, res.q);
    const Eigen::Matrix<double, 6, 1> e = pose_error(target, cur);
    res.pos_residual = e.head<3>().norm();
    res.rot_residual = e.tail<3>().norm();
    if (res.pos_residual < opts.pos_tolerance &&
        res.rot_residual < opts.rot_tolerance) {
      res.success = true;
      return res;
    }
    if (iter == opts.max_iterations) break;
    const Eigen::MatrixXd J = jacobian(spec, res.q);
    const Eigen::Matrix<double, 6, 6> JJt =
        J * J.transpose() +
        opts.damping * opts.damping * Eigen::Matrix<double, 6, 6>::Identity();
    Eigen::VectorXd dq = J.transpose() * JJt.ldlt().solve(e);
    const double step = dq.template lpNorm<Eigen::Infinity>();
    if (step > opts.max_step) dq *= opts.max_step / step;
    res.q = clamp_to_limits(spec, res.q + dq);
    (void)n;
  }
  return res;
}

}  // namespace

IkResult inverse_kinematics(const RobotSpec& spec, const Pose& target,
                            const JointConfig& seed, Rng& rng,
                            const IkOptions& opts) {
  IkResult best = ik_attempt(spec, target, seed, opts);
  if (best.success) return best;
  for (int r = 0; r < opts.max_restarts; ++r) {
    JointConfig q0(static_cast<int>(spec.dof()));
    for (std::size_t i = 0; i < spec.dof(); ++i) {
      const auto& lim = spec.joint_limits[i];
      q0[static_cast<int>(i)] = rng.uniform(lim.min, lim.max);
    }
    IkResult res = ik_attempt(spec, target, q0, opts);
    res.restarts_used = r + 1;
    if (res.success) return res;
    if (res.pos_residual + res.rot_residual <
        best.pos_residual + best.rot_residual) {
      best = res;
      best.restarts_used = r + 1;
    }
  }
  return best;
}

double manipulability_condition(const RobotSpec& spec, const JointConfig& q,
                                bool full_twist) {
  const Eigen::MatrixXd J = jacobian(spec, q);
  const Eigen::MatrixXd Jb = full_twist ? J : Eigen::MatrixXd(J.topRows(3));
  // Squared singular values of the block = eigenvalues of Jb * Jb^T restricted
  // to the span; for a planar chain this matches the in-plane 2x2 analysis.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jb);
  const Eigen::VectorXd sv = svd.singularValues();
  const double lam_max = sv[0] * sv[0];
  const double lam_min = sv[sv.size() - 1] * sv[sv.size() - 1];
  if (lam_min < 1e-12) return std::numeric_limits<double>::infinity();
  return lam_max / lam_min;
}

}  // namespace tamp::kin
