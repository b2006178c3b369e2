#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <unordered_set>
#include <vector>

#include "tamp/core/pose.hpp"

namespace tamp::world {

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

struct CellIndex {
  int32_t x = 0, y = 0, z = 0;
  bool operator==(const CellIndex&) const = default;
};

// 21-bit signed per axis packed into one key.
inline int64_t pack_cell(const CellIndex& c) {
  const auto enc = [](int32_t v) {
    return static_cast<int64_t>(v + (1 << 20)) & 0x1FFFFF;
  };
  return (enc(c.x) << 42) | (enc(c.y) << 21) | enc(c.z);
}

inline CellIndex unpack_cell(int64_t key) {
  const auto dec = [](int64_t v) {
    return static_cast<int32_t>(v & 0x1FFFFF) - (1 << 20);
  };
  return CellIndex{dec(key >> 42), dec(key >> 21), dec(key)};
}

// Flat SoA view of occupied-cell centers for the batched distance kernels.
struct CellCenters {
  std::vector<double> xs, ys, zs;
  std::size_t size() const { return xs.size(); }
};

// Binary occupancy grid at fixed resolution. Snapshots are treated as
// immutable once published to planners; mutation invalidates the cached
// center arrays.
class VoxelMap {
public:
  VoxelMap() = default;
  VoxelMap(const Vec3& origin, double resolution, const Aabb& bounds);

  double resolution() const { return h_; }
  const Vec3& origin() const { return origin_; }
  const Aabb& bounds() const { return bounds_; }

  CellIndex cell_of(const Vec3& p) const;
  Vec3 center_of(const CellIndex& c) const;
  bool in_bounds(const CellIndex& c) const;

  // Marks the cell containing each point. Out-of-bounds points are skipped
  // and counted in the diagnostic tally. Idempotent.
  void insert_points(std::span<const Vec3> points);
  void insert_cell(const CellIndex& c);

  bool occupied(const CellIndex& c) const {
    return cells_.count(pack_cell(c)) > 0;
  }
  std::size_t occupied_count() const { return cells_.size(); }
  std::size_t out_of_bounds_tally() const { return out_of_bounds_; }
  bool empty() const { return cells_.empty(); }

  const std::unordered_set<int64_t>& cell_keys() const { return cells_; }

  // Lazily built, cached until the next mutation.
  const CellCenters& centers() const;

  // Cell centers as CSV rows "x,y,z".
  void export_centers_csv(std::ostream& os) const;

  void clear();

private:
  Vec3 origin_ = Vec3::Zero();
  double h_ = 0.03;
  Aabb bounds_{Vec3(-5, -5, -5), Vec3(5, 5, 5)};
  std::unordered_set<int64_t> cells_;
  std::size_t out_of_bounds_ = 0;
  mutable CellCenters centers_;
  mutable bool centers_dirty_ = true;
};

}  // namespace tamp::world
