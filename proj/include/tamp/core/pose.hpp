#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace tamp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;

// Rigid transform: unit quaternion + translation in meters. The quaternion is
// renormalized on construction and after composition so norm stays within 1e-9
// of 1 no matter how many transforms get chained.
struct Pose {
  Quat rotation{1.0, 0.0, 0.0, 0.0};
  Vec3 translation{0.0, 0.0, 0.0};

  Pose() = default;
  Pose(const Quat& q, const Vec3& t) : rotation(q.normalized()), translation(t) {}

  static Pose identity() { return Pose(); }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation.toRotationMatrix();
    m.topRightCorner<3, 1>() = translation;
    return m;
  }
};

// Applies b then a.
Pose compose(const Pose& a, const Pose& b);

Pose inverse(const Pose& p);

// Rotation angle (rad) and translation distance (m) between two poses.
double rotation_distance(const Pose& a, const Pose& b);
double translation_distance(const Pose& a, const Pose& b);

// Rotation+offset used as a task frame (Eq-style A x + b with A restricted to
// rigid rotations in this toolkit).
struct FrameTransform {
  Mat3 A = Mat3::Identity();
  Vec3 b = Vec3::Zero();

  Vec3 apply(const Vec3& local) const { return A * local + b; }
  Vec3 apply_inverse(const Vec3& world) const { return A.transpose() * (world - b); }

  // Max deviation of A from orthonormality.
  double orthonormality_error() const {
    return (A.transpose() * A - Mat3::Identity()).cwiseAbs().maxCoeff();
  }

  static FrameTransform from_pose(const Pose& p) {
    return FrameTransform{p.rotation.toRotationMatrix(), p.translation};
  }
};

}  // namespace tamp
