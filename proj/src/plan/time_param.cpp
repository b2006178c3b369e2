#include "tamp/plan/time_param.hpp"

#include <algorithm>
#include <cmath>

namespace tamp::plan {

kin::JointConfig Trajectory::config_at(double t) const {
  if (samples.empty()) return kin::JointConfig();
  if (t <= samples.front().t) return samples.front().q;
  if (t >= samples.back().t) return samples.back().q;
  // Samples are dense and uniform-ish; linear scan from a binary search.
  const auto it = std::lower_bound(
      samples.begin(), samples.end(), t,
      [](const TrajectorySample& s, double tt) { return s.t < tt; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double u = hi.t > lo.t ? (t - lo.t) / (hi.t - lo.t) : 0.0;
  return lo.q + u * (hi.q - lo.q);
}

double trapezoid_duration(double distance, double v_max, double a_max) {
  if (distance <= 0.0) return 0.0;
  if (distance >= v_max * v_max / a_max) {
    return distance / v_max + v_max / a_max;  // reaches cruise
  }
  return 2.0 * std::sqrt(distance / a_max);  // triangular profile
}

namespace {

// Normalized arc position s(t) in [0, 1] for a trapezoid with unit distance.
double profile_position(double t, double v, double a, double total) {
  const double t_acc = v / a;
  const double cruise = std::max(0.0, total - 2.0 * t_acc);
  t = std::clamp(t, 0.0, total);
  if (t < t_acc) return 0.5 * a * t * t;
  if (t < t_acc + cruise) return 0.5 * a * t_acc * t_acc + v * (t - t_acc);
  const double td = total - t;
  return 1.0 - 0.5 * a * td * td;
}

}  // namespace

Trajectory time_parameterize(const Path& path, const kin::RobotSpec& spec,
                             double dt) {
  Trajectory traj;
  if (path.waypoints.empty()) return traj;
  double t0 = 0.0;
  traj.samples.push_back({0.0, path.waypoints.front()});

  for (std::size_t seg = 1; seg < path.waypoints.size(); ++seg) {
    const kin::JointConfig& a = path.waypoints[seg - 1];
    const kin::JointConfig& b = path.waypoints[seg];
    const kin::JointConfig delta = b - a;
    // Normalized limits: the slowest joint shapes the shared profile, which
    // keeps every joint inside its own velocity/acceleration budget.
    double v_norm = std::numeric_limits<double>::infinity();
    double a_norm = std::numeric_limits<double>::infinity();
    for (int j = 0; j < delta.size(); ++j) {
      const double dj = std::abs(delta[j]);
      if (dj < 1e-12) continue;
      v_norm = std::min(v_norm, spec.velocity_limits[static_cast<std::size_t>(j)] / dj);
      a_norm = std::min(a_norm, spec.acceleration_limits[static_cast<std::size_t>(j)] / dj);
    }
    if (!std::isfinite(v_norm)) continue;  // zero-length segment

    // Unit distance under (v_norm, a_norm); cap cruise speed for triangles.
    double total = trapezoid_duration(1.0, v_norm, a_norm);
    double v_peak = std::min(v_norm, std::sqrt(a_norm));  // triangle peak
    if (1.0 >= v_norm * v_norm / a_norm) v_peak = v_norm;

    const int steps = std::max(1, static_cast<int>(std::ceil(total / dt)));
    for (int i = 1; i <= steps; ++i) {
      const double t = total * static_cast<double>(i) / steps;
      const double s = profile_position(t, v_peak, a_norm, total);
      traj.samples.push_back({t0 + t, a + s * delta});
    }
    t0 += total;
  }
  return traj;
}

}  // namespace tamp::plan
