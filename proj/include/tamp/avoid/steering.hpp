#pragma once

#include "tamp/core/pose.hpp"

namespace tamp::avoid {

struct SteeringAngles {
  double theta = 0.0;  // angle between threat vector and velocity
  double phi = 0.0;    // steering correction, clamped to [0, pi/2]
};

// theta = arccos(c.v / |c||v|), phi = pi/2 - theta clamped to [0, pi/2]:
// head-on threats get the full quarter-turn, tangential ones none.
// DegenerateInput on zero-norm inputs.
SteeringAngles steering_angle(const Vec3& c, const Vec3& v);

// Deterministic axis for the parallel/antiparallel case: the smallest-index
// coordinate axis not parallel to v, projected onto v's orthogonal plane.
Vec3 substitute_axis(const Vec3& v);

// Rotates v by phi about normalize(c x v) via the Rodrigues expansion.
// Norm-preserving. Zero c returns v unchanged; zero v is DegenerateInput.
Vec3 steer_velocity(const Vec3& v, const Vec3& c);

}  // namespace tamp::avoid
