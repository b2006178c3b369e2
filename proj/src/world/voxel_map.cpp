#include "tamp/world/voxel_map.hpp"

#include <algorithm>
#include <cmath>

#include "tamp/core/errors.hpp"

namespace tamp::world {

VoxelMap::VoxelMap(const Vec3& origin, double resolution, const Aabb& bounds)
    : origin_(origin), h_(resolution), bounds_(bounds) {
  if (resolution <= 0.0) {
    throw ValidationError("voxel resolution must be positive");
  }
}

CellIndex VoxelMap::cell_of(const Vec3& p) const {
  const Vec3 rel = (p - origin_) / h_;
  return CellIndex{static_cast<int32_t>(std::floor(rel.x())),
                   static_cast<int32_t>(std::floor(rel.y())),
                   static_cast<int32_t>(std::floor(rel.z()))};
}

Vec3 VoxelMap::center_of(const CellIndex& c) const {
  return origin_ + h_ * Vec3(c.x + 0.5, c.y + 0.5, c.z + 0.5);
}

bool VoxelMap::in_bounds(const CellIndex& c) const {
  return bounds_.contains(center_of(c));
}

void VoxelMap::insert_points(std::span<const Vec3> points) {
  for (const Vec3& p : points) {
    if (!p.allFinite() || !bounds_.contains(p)) {
      ++out_of_bounds_;
      continue;
    }
    cells_.insert(pack_cell(cell_of(p)));
  }
  centers_dirty_ = true;
}

void VoxelMap::insert_cell(const CellIndex& c) {
  if (!in_bounds(c)) {
    ++out_of_bounds_;
    return;
  }
  cells_.insert(pack_cell(c));
  centers_dirty_ = true;
}

const CellCenters& VoxelMap::centers() const {
  if (centers_dirty_) {
    centers_.xs.clear();
    centers_.ys.clear();
    centers_.zs.clear();
    centers_.xs.reserve(cells_.size());
    centers_.ys.reserve(cells_.size());
    centers_.zs.reserve(cells_.size());
    for (const int64_t key : cells_) {
      const Vec3 c = center_of(unpack_cell(key));
      centers_.xs.push_back(c.x());
      centers_.ys.push_back(c.y());
      centers_.zs.push_back(c.z());
    }
    centers_dirty_ = false;
  }
  return centers_;
}

void VoxelMap::export_centers_csv(std::ostream& os) const {
  os << "x,y,z\n";
  const CellCenters& c = centers();
  for (std::size_t i = 0; i < c.size(); ++i) {
    os << c.xs[i] << ',' << c.ys[i] << ',' << c.zs[i] << '\n';
  }
}

void VoxelMap::clear() {
  cells_.clear();
  out_of_bounds_ = 0;
  centers_dirty_ = true;
}

}  // namespace tamp::world
