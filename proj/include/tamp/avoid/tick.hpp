#pragma once

#include <optional>
#include <vector>

#include "tamp/avoid/steering.hpp"
#include "tamp/core/scenario.hpp"
#include "tamp/world/distance.hpp"

namespace tamp::avoid {

struct VelocityCommand {
  Vec3 v = Vec3::Zero();  // end-effector linear velocity, m/s
};

struct CollisionAggregate {
  Vec3 c = Vec3::Zero();
  std::vector<world::NearCollision> contributors;
};

// c = sum of w_n * u_n over contacts, where u_n points from the robot-side
// witness toward the obstacle-side witness and w_n = clamp((eps - d)/eps, 0, 1)
// so nearer contacts dominate.
CollisionAggregate aggregate_collision_vector(
    const std::vector<world::NearCollision>& contacts, const Vec3& ee_position,
    double epsilon);

enum class TickAction { kContinue, kStop, kSteerAndReplan };

struct TickDecision {
  TickAction action = TickAction::kContinue;
  std::optional<Vec3> v_rot;
  std::optional<double> phi;
  std::optional<double> theta;
};

// Three-band policy on the total margin: below d_min stop, inside [d_min, eps]
// steer away and request a replan, above eps continue. A zero aggregate in the
// steer band keeps v unchanged but still requests the replan.
TickDecision avoidance_tick(double d_total,
                            const std::vector<world::NearCollision>& contacts,
                            const VelocityCommand& v, const SafetyParams& safety,
                            const Vec3& ee_position = Vec3::Zero());

// Contact with the robot/obstacle sides exchanged, for the other robot's view
// of a mutual pair.
world::NearCollision flip_contact(const world::NearCollision& nc);

}  // namespace tamp::avoid
