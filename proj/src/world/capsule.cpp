#include "tamp/world/capsule.hpp"

#include <algorithm>
#include <cmath>

namespace tamp::world {

double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                const Vec3& b1, Vec3* closest_a,
                                Vec3* closest_b) {
  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double A = d1.dot(d1);
  const double E = d2.dot(d2);
  const double F = d2.dot(r);
  double s = 0.0, t = 0.0;
  constexpr double kEps = 1e-16;

  if (A <= kEps && E <= kEps) {
    // both degenerate to points
  } else if (A <= kEps) {
    t = std::clamp(F / E, 0.0, 1.0);
  } else {
    const double C = d1.dot(r);
    if (E <= kEps) {
      s = std::clamp(-C / A, 0.0, 1.0);
    } else {
      const double B = d1.dot(d2);
      const double denom = A * E - B * B;
      if (denom > kEps) {
        s = std::clamp((B * F - C * E) / denom, 0.0, 1.0);
      }
      t = (B * s + F) / E;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-C / A, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((B - C) / A, 0.0, 1.0);
      }
    }
  }
  const Vec3 pa = a0 + s * d1;
  const Vec3 pb = b0 + t * d2;
  if (closest_a) *closest_a = pa;
  if (closest_b) *closest_b = pb;
  return (pa - pb).norm();
}

double capsule_distance(const Capsule& c1, const Capsule& c2, Vec3* witness_1,
                        Vec3* witness_2) {
  Vec3 pa, pb;
  const double axis_dist = segment_segment_distance(c1.p0, c1.p1, c2.p0, c2.p1, &pa, &pb);
  const double d = axis_dist - c1.radius - c2.radius;
  if (witness_1 || witness_2) {
    Vec3 dir = pb - pa;
    const double n = dir.norm();
    // Concentric axes: pick an arbitrary fixed direction for the witnesses.
    dir = n > 1e-12 ? Vec3(dir / n) : Vec3::UnitX();
    if (witness_1) *witness_1 = pa + c1.radius * dir;
    if (witness_2) *witness_2 = pb - c2.radius * dir;
  }
  return d;
}

double point_box_distance(const Vec3& p, const Vec3& box_min,
                          const Vec3& box_max, Vec3* closest) {
  const Vec3 c = p.cwiseMax(box_min).cwiseMin(box_max);
  if (closest) *closest = c;
  return (p - c).norm();
}

double segment_box_distance(const Vec3& p0, const Vec3& p1, const Vec3& box_min,
                            const Vec3& box_max, Vec3* closest_seg,
                            Vec3* closest_box) {
  const auto eval = [&](double t) {
    return point_box_distance(p0 + t * (p1 - p0), box_min, box_max);
  };
  double lo = 0.0, hi = 1.0;
  constexpr double kInvPhi = 0.6180339887498949;
  double m1 = hi - kInvPhi * (hi - lo);
  double m2 = lo + kInvPhi * (hi - lo);
  double f1 = eval(m1);
  double f2 = eval(m2);
  for (int iter = 0; iter < 80; ++iter) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - kInvPhi * (hi - lo);
      f1 = eval(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + kInvPhi * (hi - lo);
      f2 = eval(m2);
    }
  }
  double t_best = 0.5 * (lo + hi);
  double f_best = eval(t_best);
  // The optimum frequently sits on an endpoint; check both exactly.
  for (double t : {0.0, 1.0}) {
    const double f = eval(t);
    if (f < f_best) {
      f_best = f;
      t_best = t;
    }
  }
  const Vec3 ps = p0 + t_best * (p1 - p0);
  Vec3 pb;
  const double d = point_box_distance(ps, box_min, box_max, &pb);
  if (closest_seg) *closest_seg = ps;
  if (closest_box) *closest_box = pb;
  return d;
}

}  // namespace tamp::world
