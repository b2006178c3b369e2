#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tamp/kin/kinematics.hpp"
#include "tamp/world/acm.hpp"
#include "tamp/world/capsule.hpp"
#include "tamp/world/voxel_map.hpp"

namespace tamp::world {

struct NearCollision {
  std::string body_a;
  std::string body_b;
  double distance = 0.0;  // signed, meters
  Vec3 witness_a = Vec3::Zero();
  Vec3 witness_b = Vec3::Zero();
};

// Collision body set of one robot: world capsules plus their body names.
// Attached payloads are appended as an extra "<robot>/attached" body.
struct RobotBodies {
  const kin::RobotSpec* spec = nullptr;
  std::vector<std::string> names;  // per capsule
  std::vector<int> links;          // DH frame index per capsule, 1-based
  std::vector<Capsule> capsules;   // world frame, for a specific q
};

RobotBodies make_robot_bodies(const kin::RobotSpec& spec,
                              const kin::FkResult& fk);

// Appends a spherical payload capsule at the end-effector.
void attach_payload(RobotBodies& bodies, double radius, const Vec3& center);

// Default intra-arm exemptions: adjacent links and the short wrist pairs
// (3,5)/(4,6) that sit inside the near-collision band at every configuration.
AllowedCollisionMatrix default_acm(const std::string& robot_a,
                                   const std::string& robot_b);

struct EnvDistance {
  double distance = std::numeric_limits<double>::infinity();
  std::optional<NearCollision> nearest;  // populated when distance <= epsilon
};

// Minimum signed distance from any robot capsule to the occupied cells,
// measured against the exact cube geometry of each cell. Empty map -> +inf.
// Contacts (one per robot body within epsilon) are appended when `contacts`
// is given.
EnvDistance min_env_distance(const RobotBodies& bodies, const VoxelMap& map,
                             double epsilon,
                             std::vector<NearCollision>* contacts = nullptr);

// Fast validity probe: true when the environment clearance is provably at
// least `threshold`. Uses the batched center-distance lower bound and only
// refines against exact cell cubes when the bound is inconclusive.
bool env_clearance_at_least(const RobotBodies& bodies, const VoxelMap& map,
                            double threshold);

struct MutualDistance {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<NearCollision> contacts;  // all non-allowed pairs within epsilon
};

// Minimum capsule distance over all non-allowed pairs: cross-arm pairs plus
// non-adjacent intra-arm pairs of both robots.
MutualDistance min_mutual_distance(const RobotBodies& a, const RobotBodies& b,
                                   const AllowedCollisionMatrix& acm,
                                   double epsilon);

// Early-exit boolean variant of the above for validity checks.
bool mutual_clearance_at_least(const RobotBodies& a, const RobotBodies& b,
                               const AllowedCollisionMatrix& acm,
                               double threshold);

// min{d_env, d_mutual}; min-aggregation so one critically small margin can
// never be masked by the other.
inline double total_margin(double d_env, double d_mutual) {
  return std::min(d_env, d_mutual);
}

// Signed distance between one capsule and the nearest occupied cell cube.
// Returns +inf for an empty map.
double capsule_env_distance(const Capsule& cap, const VoxelMap& map,
                            Vec3* witness_cap = nullptr,
                            Vec3* witness_cell = nullptr);

}  // namespace tamp::world
