#include "tamp/avoid/tick.hpp"

#include <algorithm>
#include <cmath>

namespace tamp::avoid {

CollisionAggregate aggregate_collision_vector(
    const std::vector<world::NearCollision>& contacts, const Vec3& ee_position,
    double epsilon) {
  CollisionAggregate agg;
  for (const auto& nc : contacts) {
    if (nc.distance > epsilon) continue;
    Vec3 dir = nc.witness_b - nc.witness_a;
    double n = dir.norm();
    if (n < 1e-12) {
      // Touching contact: witnesses coincide, fall back to pushing from the EE.
      dir = nc.witness_b - ee_position;
      n = dir.norm();
      if (n < 1e-12) continue;
    }
    const double w = std::clamp((epsilon - nc.distance) / epsilon, 0.0, 1.0);
    agg.c += w * (dir / n);
    agg.contributors.push_back(nc);
  }
  return agg;
}

world::NearCollision flip_contact(const world::NearCollision& nc) {
  world::NearCollision out = nc;
  std::swap(out.body_a, out.body_b);
  std::swap(out.witness_a, out.witness_b);
  return out;
}

TickDecision avoidance_tick(double d_total,
                            const std::vector<world::NearCollision>& contacts,
                            const VelocityCommand& v, const SafetyParams& safety,
                            const Vec3& ee_position) {
  TickDecision out;
  if (d_total < safety.d_min) {
    out.action = TickAction::kStop;
    return out;
  }
  if (d_total > safety.epsilon) {
    out.action = TickAction::kContinue;
    return out;
  }
  out.action = TickAction::kSteerAndReplan;
  const CollisionAggregate agg =
      aggregate_collision_vector(contacts, ee_position, safety.epsilon);
  if (agg.c.norm() < 1e-12 || v.v.norm() < 1e-12) {
    out.v_rot = v.v;  // nothing to steer against (or no motion to steer)
    return out;
  }
  const SteeringAngles ang = steering_angle(agg.c, v.v);
  out.theta = ang.theta;
  out.phi = ang.phi;
  out.v_rot = steer_velocity(v.v, agg.c);
  return out;
}

}  // namespace tamp::avoid
