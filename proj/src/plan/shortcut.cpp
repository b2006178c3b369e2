#include "tamp/plan/shortcut.hpp"

#include <algorithm>
#include <cmath>

#include "tamp/core/rng.hpp"

namespace tamp::plan {

namespace {

// Straight segment re-discretized so consecutive waypoints stay within
// step_size in max-norm.
std::vector<kin::JointConfig> discretize(const kin::JointConfig& a,
                                         const kin::JointConfig& b,
                                         double step_size) {
  const double span = (b - a).lpNorm<Eigen::Infinity>();
  const int steps = std::max(1, static_cast<int>(std::ceil(span / step_size)));
  std::vector<kin::JointConfig> out;
  for (int i = 1; i <= steps; ++i) {
    out.push_back(a + (static_cast<double>(i) / steps) * (b - a));
  }
  return out;
}

}  // namespace

Path shortcut(const Path& path, const ValidityContext& validity, int iterations,
              uint64_t seed, double step_size) {
  if (path.waypoints.size() < 3) return path;
  Path out = path;
  Rng rng(seed);
  const gmm::RegionQ* region = validity.region();

  for (int iter = 0; iter < iterations; ++iter) {
    const std::size_t n = out.waypoints.size();
    if (n < 3) break;
    std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n);
    if (i > j) std::swap(i, j);
    if (j - i < 2) continue;

    const kin::JointConfig& a = out.waypoints[i];
    const kin::JointConfig& b = out.waypoints[j];
    // Straight replacement can only shorten (triangle inequality); check it
    // actually does before paying for validity checks.
    double seg_len = 0.0;
    for (std::size_t w = i; w < j; ++w) {
      seg_len += (out.waypoints[w + 1] - out.waypoints[w]).norm();
    }
    const double straight = (b - a).norm();
    if (straight >= seg_len - 1e-12) continue;

    if (!validity.edge_valid(a, b, step_size / 4.0)) continue;
    const std::vector<kin::JointConfig> mids = discretize(a, b, step_size);
    if (region != nullptr) {
      bool ok = true;
      for (const auto& q : mids) {
        if (!region->contains(kin::fk_ee(validity.robot(), q).translation)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
    }
    std::vector<kin::JointConfig> next(out.waypoints.begin(),
                                       out.waypoints.begin() +
                                           static_cast<long>(i + 1));
    next.insert(next.end(), mids.begin(), mids.end());
    next.insert(next.end(), out.waypoints.begin() + static_cast<long>(j + 1),
                out.waypoints.end());
    out.waypoints = std::move(next);
  }
  return out;
}

}  // namespace tamp::plan
