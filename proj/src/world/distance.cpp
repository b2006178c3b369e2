#include "tamp/world/distance.hpp"

#include <algorithm>
#include <cmath>

#include "tamp/simd/kernels.hpp"

namespace tamp::world {

RobotBodies make_robot_bodies(const kin::RobotSpec& spec,
                              const kin::FkResult& fk) {
  RobotBodies out;
  out.spec = &spec;
  for (std::size_t link = 0; link < spec.link_capsules.size(); ++link) {
    for (const kin::CapsuleSpec& local : spec.link_capsules[link]) {
      out.names.push_back(spec.name + "/link" + std::to_string(link + 1));
      out.links.push_back(static_cast<int>(link + 1));
      out.capsules.push_back(transform_capsule(fk.link_poses[link], local));
    }
  }
  return out;
}

void attach_payload(RobotBodies& bodies, double radius, const Vec3& center) {
  bodies.names.push_back(bodies.spec->name + "/attached");
  bodies.links.push_back(static_cast<int>(bodies.spec->dof()) + 1);
  bodies.capsules.push_back(Capsule{center, center, radius});
}

AllowedCollisionMatrix default_acm(const std::string& robot_a,
                                   const std::string& robot_b) {
  AllowedCollisionMatrix acm;
  const auto link = [](const std::string& r, int i) {
    return r + "/link" + std::to_string(i);
  };
  for (const std::string& r : {robot_a, robot_b}) {
    if (r.empty()) continue;
    for (int i = 1; i <= 6; ++i) {
      acm.allow(link(r, i), link(r, i + 1));
    }
    // Forearm/wrist cluster: these short links ride inside the near-collision
    // band at ordinary work poses and cannot reach each other anyway. Checked
    // intra-arm pairs are the distal links against the column and upper arm.
    for (int i = 3; i <= 6; ++i) {
      for (int j = i + 1; j <= 6; ++j) {
        acm.allow(link(r, i), link(r, j));
      }
    }
    // Payload rides on the wrist; exempt it from its carrier links.
    acm.allow(r + "/attached", link(r, 4));
    acm.allow(r + "/attached", link(r, 5));
    acm.allow(r + "/attached", link(r, 6));
  }
  return acm;
}

namespace {

thread_local std::vector<double> g_dist2_scratch;

// Exact signed distance from a capsule to one cell cube.
double capsule_cell_distance(const Capsule& cap, const Vec3& center, double h,
                             Vec3* wit_cap, Vec3* wit_cell) {
  const Vec3 half(0.5 * h, 0.5 * h, 0.5 * h);
  Vec3 ps, pb;
  const double axis_d =
      segment_box_distance(cap.p0, cap.p1, center - half, center + half, &ps, &pb);
  if (wit_cap || wit_cell) {
    Vec3 dir = pb - ps;
    const double n = dir.norm();
    dir = n > 1e-12 ? Vec3(dir / n) : Vec3::UnitX();
    if (wit_cap) *wit_cap = ps + cap.radius * dir;
    if (wit_cell) *wit_cell = pb;
  }
  return axis_d - cap.radius;
}

}  // namespace

double capsule_env_distance(const Capsule& cap, const VoxelMap& map,
                            Vec3* witness_cap, Vec3* witness_cell) {
  const CellCenters& cc = map.centers();
  if (cc.size() == 0) return std::numeric_limits<double>::infinity();
  const double h = map.resolution();
  const double half_diag = 0.5 * std::sqrt(3.0) * h;

  const auto& kernels = simd::active_kernels();
  const simd::Segment seg = simd::make_segment(cap.p0.x(), cap.p0.y(), cap.p0.z(),
                                               cap.p1.x(), cap.p1.y(), cap.p1.z());
  g_dist2_scratch.resize(cc.size());
  kernels.point_segment_dist2(cc.xs.data(), cc.ys.data(), cc.zs.data(),
                              cc.size(), seg, g_dist2_scratch.data());

  double min_center = std::numeric_limits<double>::infinity();
  for (double d2 : g_dist2_scratch) min_center = std::min(min_center, d2);
  min_center = std::sqrt(min_center);

  // Cells whose center distance is within a half diagonal of the best center
  // distance are the only candidates for the exact cube minimum.
  const double cutoff = min_center + half_diag;
  const double cutoff2 = cutoff * cutoff;
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_wc = Vec3::Zero(), best_wb = Vec3::Zero();
  for (std::size_t i = 0; i < cc.size(); ++i) {
    if (g_dist2_scratch[i] > cutoff2) continue;
    Vec3 wc, wb;
    const Vec3 center(cc.xs[i], cc.ys[i], cc.zs[i]);
    const double d = capsule_cell_distance(cap, center, h, &wc, &wb);
    if (d < best) {
      best = d;
      best_wc = wc;
      best_wb = wb;
    }
  }
  if (witness_cap) *witness_cap = best_wc;
  if (witness_cell) *witness_cell = best_wb;
  return best;
}

EnvDistance min_env_distance(const RobotBodies& bodies, const VoxelMap& map,
                             double epsilon,
                             std::vector<NearCollision>* contacts) {
  EnvDistance out;
  if (map.empty()) return out;
  for (std::size_t i = 0; i < bodies.capsules.size(); ++i) {
    Vec3 wc, wb;
    const double d = capsule_env_distance(bodies.capsules[i], map, &wc, &wb);
    if (d <= epsilon) {
      NearCollision nc{bodies.names[i], "env", d, wc, wb};
      if (contacts) contacts->push_back(nc);
      if (!out.nearest || d < out.nearest->distance) out.nearest = nc;
    }
    out.distance = std::min(out.distance, d);
  }
  return out;
}

bool env_clearance_at_least(const RobotBodies& bodies, const VoxelMap& map,
                            double threshold) {
  if (map.empty()) return true;
  const CellCenters& cc = map.centers();
  const double h = map.resolution();
  const double half_diag = 0.5 * std::sqrt(3.0) * h;
  const auto& kernels = simd::active_kernels();
  for (std::size_t i = 0; i < bodies.capsules.size(); ++i) {
    const Capsule& cap = bodies.capsules[i];
    const simd::Segment seg =
        simd::make_segment(cap.p0.x(), cap.p0.y(), cap.p0.z(), cap.p1.x(),
                           cap.p1.y(), cap.p1.z());
    const double min_d2 = kernels.min_point_segment_dist2(
        cc.xs.data(), cc.ys.data(), cc.zs.data(), cc.size(), seg, nullptr);
    const double lower = std::sqrt(min_d2) - half_diag - cap.radius;
    if (lower >= threshold) continue;
    // Bound inconclusive: fall back to the exact per-cell minimum.
    if (capsule_env_distance(cap, map, nullptr, nullptr) < threshold) {
      return false;
    }
  }
  return true;
}

bool mutual_clearance_at_least(const RobotBodies& a, const RobotBodies& b,
                               const AllowedCollisionMatrix& acm,
                               double threshold) {
  const auto pair_ok = [&](const RobotBodies& lhs, std::size_t i,
                           const RobotBodies& rhs, std::size_t j) {
    if (acm.is_allowed(lhs.names[i], rhs.names[j])) return true;
    const Capsule& c1 = lhs.capsules[i];
    const Capsule& c2 = rhs.capsules[j];
    const double need = threshold + c1.radius + c2.radius;
    return segment_segment_distance(c1.p0, c1.p1, c2.p0, c2.p1) >= need;
  };
  if (&a != &b) {
    for (std::size_t i = 0; i < a.capsules.size(); ++i) {
      for (std::size_t j = 0; j < b.capsules.size(); ++j) {
        if (!pair_ok(a, i, b, j)) return false;
      }
    }
  }
  const RobotBodies* sides[2] = {&a, &b};
  const std::size_t n_sides = (&a == &b) ? 1 : 2;
  for (std::size_t t = 0; t < n_sides; ++t) {
    const RobotBodies* r = sides[t];
    for (std::size_t i = 0; i < r->capsules.size(); ++i) {
      for (std::size_t j = i + 1; j < r->capsules.size(); ++j) {
        if (r->names[i] == r->names[j]) continue;
        if (!pair_ok(*r, i, *r, j)) return false;
      }
    }
  }
  return true;
}

MutualDistance min_mutual_distance(const RobotBodies& a, const RobotBodies& b,
                                   const AllowedCollisionMatrix& acm,
                                   double epsilon) {
  MutualDistance out;
  const auto consider = [&](const RobotBodies& lhs, std::size_t i,
                            const RobotBodies& rhs, std::size_t j) {
    if (acm.is_allowed(lhs.names[i], rhs.names[j])) return;
    Vec3 wa, wb;
    const double d =
        capsule_distance(lhs.capsules[i], rhs.capsules[j], &wa, &wb);
    if (d <= epsilon) {
      out.contacts.push_back(
          NearCollision{lhs.names[i], rhs.names[j], d, wa, wb});
    }
    out.distance = std::min(out.distance, d);
  };

  // Cross-arm pairs.
  if (&a != &b) {
    for (std::size_t i = 0; i < a.capsules.size(); ++i) {
      for (std::size_t j = 0; j < b.capsules.size(); ++j) {
        consider(a, i, b, j);
      }
    }
  }
  // Intra-arm non-adjacent pairs of each robot.
  const RobotBodies* sides[2] = {&a, &b};
  const std::size_t n_sides = (&a == &b) ? 1 : 2;
  for (std::size_t t = 0; t < n_sides; ++t) {
    const RobotBodies* r = sides[t];
    for (std::size_t i = 0; i < r->capsules.size(); ++i) {
      for (std::size_t j = i + 1; j < r->capsules.size(); ++j) {
        if (r->names[i] == r->names[j]) continue;  // same body, multiple capsules
        consider(*r, i, *r, j);
      }
    }
  }
  return out;
}

}  // namespace tamp::world
