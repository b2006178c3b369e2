#include "tamp/avoid/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tamp/core/errors.hpp"

namespace tamp::avoid {

SteeringAngles steering_angle(const Vec3& c, const Vec3& v) {
  const double nc = c.norm();
  const double nv = v.norm();
  if (nc <= 0.0 || nv <= 0.0) {
    throw DegenerateInput("steering_angle: zero-norm input");
  }
  const double cos_theta = std::clamp(c.dot(v) / (nc * nv), -1.0, 1.0);
  SteeringAngles out;
  out.theta = std::acos(cos_theta);
  out.phi = std::clamp(std::numbers::pi / 2.0 - out.theta, 0.0,
                       std::numbers::pi / 2.0);
  return out;
}

Vec3 substitute_axis(const Vec3& v) {
  const Vec3 vn = v.normalized();
  for (int i = 0; i < 3; ++i) {
    Vec3 axis = Vec3::Zero();
    axis[i] = 1.0;
    if (std::abs(axis.dot(vn)) < 1.0 - 1e-9) {
      const Vec3 projected = axis - axis.dot(vn) * vn;
      return projected.normalized();
    }
  }
  return Vec3::UnitY();  // unreachable for finite v
}

Vec3 steer_velocity(const Vec3& v, const Vec3& c) {
  if (v.norm() <= 0.0) {
    throw DegenerateInput("steer_velocity: zero-norm velocity");
  }
  if (c.norm() <= 0.0) return v;

  const SteeringAngles ang = steering_angle(c, v);
  Vec3 k = c.cross(v);
  if (k.norm() < 1e-9) {
    k = substitute_axis(v);
  } else {
    k.normalize();
  }
  const double s = std::sin(ang.phi);
  const double cph = std::cos(ang.phi);
  return v + s * k.cross(v) + (1.0 - cph) * k.cross(k.cross(v));
}

}  // namespace tamp::avoid
