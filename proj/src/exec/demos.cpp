#include "tamp/exec/demos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tamp/core/errors.hpp"

namespace tamp::exec {

gmm::TaskFrames make_task_frames(const Vec3& start, const Vec3& goal,
                                 const Vec3& obstacle) {
  Vec3 x = goal - start;
  const double n = x.norm();
  x = n > 1e-9 ? Vec3(x / n) : Vec3::UnitX();
  Vec3 ref = std::abs(x.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitY();
  Vec3 y = ref.cross(x).normalized();
  const Vec3 z = x.cross(y);
  Mat3 rot;
  rot.col(0) = x;
  rot.col(1) = y;
  rot.col(2) = z;
  gmm::TaskFrames frames;
  frames.start = FrameTransform{rot, start};
  frames.goal = FrameTransform{rot, goal};
  frames.obstacle = FrameTransform{rot, obstacle};
  return frames;
}

namespace {

double min_jerk(double u) {
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

struct Curve {
  Vec3 start, goal, obstacle;
  Vec3 bump_dir = Vec3::Zero();
  double bump_amp = 0.0;

  Vec3 eval(double u) const {
    const double m = min_jerk(u);
    const double bump = std::sin(std::numbers::pi * u);
    return start + m * (goal - start) + (bump_amp * bump * bump) * bump_dir;
  }
};

}  // namespace

DemonstrationSet generate_demonstrations(const Pose& start, const Pose& goal,
                                         const Pose& obstacle, int demo_count,
                                         int samples, uint64_t seed,
                                         const DemoGenParams& params) {
  const Vec3 s = start.translation;
  const Vec3 g = goal.translation;
  const Vec3 o = obstacle.translation;
  if ((g - s).norm() < 1e-9) {
    throw DegenerateInput("generate_demonstrations: start equals goal");
  }
  if (demo_count < 5 || samples < 50) {
    throw ValidationError("generate_demonstrations: need M >= 5 and T >= 50");
  }
  if ((s - o).norm() < params.detour_clearance ||
      (g - o).norm() < params.detour_clearance) {
    throw DegenerateInput(
        "generate_demonstrations: endpoint inside obstacle clearance");
  }

  Curve curve{s, g, o};
  {
    // Push direction: from the obstacle away from the straight corridor.
    const Vec3 dir = (g - s).normalized();
    const double t = std::clamp((o - s).dot(dir) / (g - s).norm(), 0.0, 1.0);
    const Vec3 closest = s + t * (g - s);
    Vec3 away = closest - o;
    if (away.norm() < 1e-9) {
      away = dir.cross(Vec3::UnitZ());
      if (away.norm() < 1e-9) away = dir.cross(Vec3::UnitY());
    }
    curve.bump_dir = away.normalized();
    // Grow the bump until the noiseless curve clears the obstacle with room
    // for the per-demo perturbations.
    const double target = params.detour_clearance + 6.0 * params.noise_sigma;
    curve.bump_amp = 0.0;
    for (int round = 0; round < 64; ++round) {
      double min_d = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 200; ++i) {
        min_d = std::min(min_d, (curve.eval(i / 200.0) - o).norm());
      }
      if (min_d >= target) break;
      curve.bump_amp += 0.5 * (target - min_d) + 0.01;
    }
  }

  const gmm::TaskFrames frames = make_task_frames(s, g, o);
  Rng rng(seed);
  DemonstrationSet out;
  out.demo_count = demo_count;
  out.samples_per_demo = samples;
  out.params = params;

  for (int m = 0; m < demo_count; ++m) {
    Rng demo_rng = rng.fork(static_cast<uint64_t>(m));
    // Smooth perturbation: low-order sinusoids vanishing at the endpoints.
    Vec3 amp[3];
    for (int mode = 0; mode < 3; ++mode) {
      amp[mode] =
          Vec3(demo_rng.normal(), demo_rng.normal(), demo_rng.normal()) *
          (params.noise_sigma / (mode + 1));
    }
    gmm::Demonstration demo;
    demo.frames = frames;
    demo.times.reserve(static_cast<std::size_t>(samples));
    demo.points.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
      double u;
      if (i == 0) {
        u = 0.0;
      } else if (i == samples - 1) {
        u = 1.0;
      } else if (params.clustered) {
        // Concentrate interior samples at evenly spaced stations.
        const int station = (i - 1) * params.stations / (samples - 2);
        const double center =
            (station + 0.5) / static_cast<double>(params.stations);
        u = std::clamp(center + demo_rng.normal(0.0, 0.02), 0.01, 0.99);
      } else {
        u = static_cast<double>(i) / (samples - 1);
      }
      Vec3 p = curve.eval(u);
      for (int mode = 0; mode < 3; ++mode) {
        p += amp[mode] * std::sin((mode + 1) * std::numbers::pi * u);
      }
      // Hard clearance: project out of the obstacle ball if noise dipped in.
      const Vec3 rel = p - o;
      const double r = rel.norm();
      if (u > 0.0 && u < 1.0 && r < params.detour_clearance) {
        p = o + rel * (params.detour_clearance / std::max(r, 1e-12));
      }
      demo.times.push_back(u);
      demo.points.push_back(p);
    }
    out.demos.push_back(std::move(demo));
  }
  return out;
}

DemonstrationSet make_training_set(const Vec3& start_zone_center,
                                   const Vec3& goal_zone_center,
                                   double zone_radius, int demo_count,
                                   int samples, uint64_t seed,
                                   const DemoGenParams& params) {
  Rng rng(seed);
  DemonstrationSet out;
  out.demo_count = demo_count;
  out.samples_per_demo = samples;
  out.params = params;
  int attempts = 0;
  while (static_cast<int>(out.demos.size()) < demo_count && attempts < 10 * demo_count) {
    ++attempts;
    Rng task_rng = rng.fork(static_cast<uint64_t>(attempts));
    const auto jitter = [&](const Vec3& c) {
      return Vec3(c.x() + task_rng.uniform(-zone_radius, zone_radius),
                  c.y() + task_rng.uniform(-zone_radius, zone_radius),
                  c.z() + task_rng.uniform(-0.5 * zone_radius, 0.5 * zone_radius));
    };
    const Vec3 s = jitter(start_zone_center);
    const Vec3 g = jitter(goal_zone_center);
    Vec3 mid = 0.5 * (s + g);
    mid += Vec3(task_rng.uniform(-0.05, 0.05), task_rng.uniform(-0.05, 0.05),
                task_rng.uniform(-0.05, 0.02));
    if ((g - s).norm() < 0.2 || (s - mid).norm() < params.detour_clearance ||
        (g - mid).norm() < params.detour_clearance) {
      continue;
    }
    DemonstrationSet one = generate_demonstrations(
        Pose(Quat::Identity(), s), Pose(Quat::Identity(), g),
        Pose(Quat::Identity(), mid), 5, samples,
        task_rng.next_u64(), params);
    // One demo per sampled task keeps frame variation high.
    out.demos.push_back(std::move(one.demos.front()));
  }
  if (static_cast<int>(out.demos.size()) < demo_count) {
    throw FitFailure("make_training_set: could not place enough tasks");
  }
  return out;
}

}  // namespace tamp::exec
