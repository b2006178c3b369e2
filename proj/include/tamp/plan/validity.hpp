#pragma once

#include <optional>
#include <vector>

#include "tamp/core/scenario.hpp"
#include "tamp/gmm/tpgmm.hpp"
#include "tamp/world/distance.hpp"

namespace tamp::plan {

// Margin-check context a planner validates against: a voxel snapshot, the
// other arm's committed configuration, the ACM and the safety bands. All
// referenced data is immutable for the lifetime of a query.
class ValidityContext {
public:
  ValidityContext(const kin::RobotSpec& robot, const SafetyParams& safety);

  void set_map(const world::VoxelMap* map) { map_ = map; }
  void set_other(const kin::RobotSpec* other, const kin::JointConfig& q);
  void set_acm(const world::AllowedCollisionMatrix* acm) {
    acm_ = acm;
    pairs_dirty_ = true;
  }
  void set_payload(double radius) {
    payload_radius_ = radius;
    pairs_dirty_ = true;
  }
  void clear_payload() {
    payload_radius_.reset();
    pairs_dirty_ = true;
  }
  // Waypoint-level region constraint (membership of the EE translation).
  void set_region(const gmm::RegionQ* region) { region_ = region; }

  // Margin used by the validity checks. Defaults to d_min (the hard floor);
  // planners may raise it so nominal paths keep out of the steering band.
  void set_check_margin(double margin) { check_margin_ = margin; }
  double check_margin() const { return check_margin_; }

  const kin::RobotSpec& robot() const { return *robot_; }
  const SafetyParams& safety() const { return safety_; }
  const gmm::RegionQ* region() const { return region_; }

  // d_total(q) >= d_min and, when a region is set, FK(q) in Q.
  bool state_valid(const kin::JointConfig& q) const;

  // Clearance-only variant (no region test), used for interpolated sub-steps.
  bool margins_ok(const kin::JointConfig& q) const;

  // Checks interpolated configurations every `resolution` (max-norm) along
  // the straight segment, endpoints excluded.
  bool edge_valid(const kin::JointConfig& a, const kin::JointConfig& b,
                  double resolution) const;

  // Exact d_total with optional contact collection (within epsilon).
  double total_margin_at(const kin::JointConfig& q,
                         std::vector<world::NearCollision>* contacts = nullptr,
                         double* d_env = nullptr, double* d_mutual = nullptr) const;

  world::RobotBodies bodies_at(const kin::JointConfig& q) const;

private:
  // Reference into the internal scratch buffer, valid until the next query.
  const world::RobotBodies& bodies_ref_at(const kin::JointConfig& q) const;
  void rebuild_pairs() const;

  struct CheckPair {
    std::size_t i, j;
    double radius_sum;
  };

  const kin::RobotSpec* robot_;
  SafetyParams safety_;
  const world::VoxelMap* map_ = nullptr;
  const kin::RobotSpec* other_robot_ = nullptr;
  std::optional<world::RobotBodies> other_bodies_;
  const world::AllowedCollisionMatrix* acm_ = nullptr;
  std::optional<double> payload_radius_;
  const gmm::RegionQ* region_ = nullptr;
  double check_margin_ = -1.0;  // < 0: use safety d_min
  // One context per planner instance; scratch state makes queries cheap.
  mutable world::RobotBodies scratch_;
  mutable std::vector<CheckPair> self_pairs_;
  mutable std::vector<CheckPair> cross_pairs_;
  mutable bool pairs_dirty_ = true;
};

}  // namespace tamp::plan
