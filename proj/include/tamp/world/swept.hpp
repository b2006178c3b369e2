#pragma once

#include <unordered_set>
#include <vector>

#include "tamp/kin/kinematics.hpp"
#include "tamp/world/capsule.hpp"
#include "tamp/world/voxel_map.hpp"

namespace tamp::world {

// Marks every cell whose center lies inside the capsule. Center sampling is a
// midpoint rule for the enclosed volume: cube-overlap counting would inflate
// the estimate by roughly a half-cell skin.
void voxelize_capsule(const Capsule& cap, double h,
                      std::unordered_set<int64_t>& cells);

// Incremental swept-volume accounting over a sequence of configurations on a
// grid anchored at the world origin. Consecutive configurations are densified
// until end-effector displacement per step drops below h/2 so links cannot
// tunnel between samples.
class SweptAccumulator {
public:
  explicit SweptAccumulator(double h, bool ee_only = false)
      : h_(h), ee_only_(ee_only) {}

  void add_config(const kin::RobotSpec& spec, const kin::JointConfig& q);

  std::size_t n_occ() const { return cells_.size(); }
  double volume() const { return static_cast<double>(cells_.size()) * h_ * h_ * h_; }
  double resolution() const { return h_; }
  const std::unordered_set<int64_t>& cells() const { return cells_; }

private:
  void voxelize_state(const kin::RobotSpec& spec, const kin::JointConfig& q);

  double h_;
  bool ee_only_;
  bool has_prev_ = false;
  kin::JointConfig prev_;
  std::unordered_set<int64_t> cells_;
};

struct SweptResult {
  double volume = 0.0;
  std::size_t n_occ = 0;
  std::unordered_set<int64_t> cells;
  double h = 0.0;
};

// Union of voxels covered by any link capsule across the given states.
SweptResult swept_volume(const kin::RobotSpec& spec,
                         const std::vector<kin::JointConfig>& states, double h,
                         bool ee_only = false);

// |A n B| * h^3 for cell sets on the same grid.
double overlap_volume(const std::unordered_set<int64_t>& a, double h_a,
                      const std::unordered_set<int64_t>& b, double h_b);

}  // namespace tamp::world
