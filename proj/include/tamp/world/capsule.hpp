#pragma once

#include "tamp/core/pose.hpp"
#include "tamp/kin/robot_spec.hpp"

namespace tamp::world {

// Capsule in world coordinates.
struct Capsule {
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  double radius = 0.0;
};

inline Capsule transform_capsule(const Pose& pose, const kin::CapsuleSpec& local) {
  return Capsule{pose.apply(local.p0), pose.apply(local.p1), local.radius};
}

// Closest points between two segments (Ericson-style clamped solve).
double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                const Vec3& b1, Vec3* closest_a = nullptr,
                                Vec3* closest_b = nullptr);

// Signed surface distance: segment-segment distance minus both radii.
// Witnesses land on the capsule surfaces along the connecting direction.
double capsule_distance(const Capsule& c1, const Capsule& c2,
                        Vec3* witness_1 = nullptr, Vec3* witness_2 = nullptr);

// Distance from a point to an axis-aligned box.
double point_box_distance(const Vec3& p, const Vec3& box_min,
                          const Vec3& box_max, Vec3* closest = nullptr);

// Minimum distance between a segment and an axis-aligned box. The squared
// distance along the segment parameter is convex, so a golden-section scan
// converges to the global minimum.
double segment_box_distance(const Vec3& p0, const Vec3& p1, const Vec3& box_min,
                            const Vec3& box_max, Vec3* closest_seg = nullptr,
                            Vec3* closest_box = nullptr);

}  // namespace tamp::world
