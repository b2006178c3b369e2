#include "tamp/world/swept.hpp"

#include <algorithm>
#include <cmath>

#include "tamp/core/errors.hpp"
#include "tamp/simd/kernels.hpp"

namespace tamp::world {

void voxelize_capsule(const Capsule& cap, double h,
                      std::unordered_set<int64_t>& cells) {
  const Vec3 lo = cap.p0.cwiseMin(cap.p1).array() - cap.radius;
  const Vec3 hi = cap.p0.cwiseMax(cap.p1).array() + cap.radius;
  const auto idx = [h](double v) {
    return static_cast<int32_t>(std::floor(v / h));
  };
  const int32_t x0 = idx(lo.x()), x1 = idx(hi.x());
  const int32_t y0 = idx(lo.y()), y1 = idx(hi.y());
  const int32_t z0 = idx(lo.z()), z1 = idx(hi.z());
  const std::size_t nx = static_cast<std::size_t>(x1 - x0 + 1);

  const auto& kernels = simd::active_kernels();
  const simd::Segment seg = simd::make_segment(cap.p0.x(), cap.p0.y(), cap.p0.z(),
                                               cap.p1.x(), cap.p1.y(), cap.p1.z());
  const double r2 = cap.radius * cap.radius;
  const double cx0 = (static_cast<double>(x0) + 0.5) * h;
  thread_local std::vector<std::uint8_t> mask;
  mask.resize(nx);
  for (int32_t iz = z0; iz <= z1; ++iz) {
    const double cz = (static_cast<double>(iz) + 0.5) * h;
    for (int32_t iy = y0; iy <= y1; ++iy) {
      const double cy = (static_cast<double>(iy) + 0.5) * h;
      kernels.row_segment_within(cx0, h, nx, cy, cz, seg, r2, mask.data());
      for (std::size_t i = 0; i < nx; ++i) {
        if (mask[i]) {
          cells.insert(pack_cell(
              CellIndex{x0 + static_cast<int32_t>(i), iy, iz}));
        }
      }
    }
  }
}

void SweptAccumulator::voxelize_state(const kin::RobotSpec& spec,
                                      const kin::JointConfig& q) {
  const kin::FkResult fk = kin::forward_kinematics(spec, q);
  const std::size_t first_link = ee_only_ ? spec.dof() - 1 : 0;
  for (std::size_t link = first_link; link < spec.link_capsules.size(); ++link) {
    for (const kin::CapsuleSpec& local : spec.link_capsules[link]) {
      voxelize_capsule(transform_capsule(fk.link_poses[link], local), h_, cells_);
    }
  }
}

void SweptAccumulator::add_config(const kin::RobotSpec& spec,
                                  const kin::JointConfig& q) {
  if (!has_prev_) {
    voxelize_state(spec, q);
    prev_ = q;
    has_prev_ = true;
    return;
  }
  // Depth-first bisection until per-step EE displacement is below h/2.
  std::vector<std::pair<kin::JointConfig, kin::JointConfig>> stack;
  stack.emplace_back(prev_, q);
  int guard = 0;
  while (!stack.empty() && ++guard < 100000) {
    auto [qa, qb] = stack.back();
    stack.pop_back();
    const double ee_step = (kin::fk_ee(spec, qa).translation -
                            kin::fk_ee(spec, qb).translation)
                               .norm();
    if (ee_step >= 0.5 * h_ && (qa - qb).lpNorm<Eigen::Infinity>() > 1e-9) {
      const kin::JointConfig mid = 0.5 * (qa + qb);
      stack.emplace_back(mid, qb);
      stack.emplace_back(qa, mid);
      continue;
    }
    voxelize_state(spec, qb);
  }
  prev_ = q;
}

SweptResult swept_volume(const kin::RobotSpec& spec,
                         const std::vector<kin::JointConfig>& states, double h,
                         bool ee_only) {
  SweptAccumulator acc(h, ee_only);
  for (const auto& q : states) acc.add_config(spec, q);
  SweptResult out;
  out.cells = acc.cells();
  out.n_occ = out.cells.size();
  out.volume = acc.volume();
  out.h = h;
  return out;
}

double overlap_volume(const std::unordered_set<int64_t>& a, double h_a,
                      const std::unordered_set<int64_t>& b, double h_b) {
  if (std::abs(h_a - h_b) > 1e-12) {
    throw ValidationError("overlap_volume: resolution mismatch");
  }
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const int64_t key : small) n += large.count(key);
  return static_cast<double>(n) * h_a * h_a * h_a;
}

}  // namespace tamp::world
