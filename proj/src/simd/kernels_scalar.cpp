#include "tamp/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tamp::simd {

Segment make_segment(double ax, double ay, double az,
                     double bx, double by, double bz) {
  Segment s;
  s.ax = ax;
  s.ay = ay;
  s.az = az;
  s.dx = bx - ax;
  s.dy = by - ay;
  s.dz = bz - az;
  const double dd = s.dx * s.dx + s.dy * s.dy + s.dz * s.dz;
  s.inv_dd = dd > 0.0 ? 1.0 / dd : 0.0;
  return s;
}

namespace {

inline double dist2_one(double px, double py, double pz, const Segment& s) {
  const double wx = px - s.ax;
  const double wy = py - s.ay;
  const double wz = pz - s.az;
  double t = (wx * s.dx + wy * s.dy + wz * s.dz) * s.inv_dd;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = wx - t * s.dx;
  const double ey = wy - t * s.dy;
  const double ez = wz - t * s.dz;
  return ex * ex + ey * ey + ez * ez;
}

void dist2_batch(const double* xs, const double* ys, const double* zs,
                 std::size_t n, const Segment& seg, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = dist2_one(xs[i], ys[i], zs[i], seg);
  }
}

double min_dist2(const double* xs, const double* ys, const double* zs,
                 std::size_t n, const Segment& seg, std::size_t* argmin) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = dist2_one(xs[i], ys[i], zs[i], seg);
    if (d2 < best) {
      best = d2;
      best_i = i;
    }
  }
  if (argmin) *argmin = best_i;
  return best;
}

void row_within(double x0, double step, std::size_t n, double y, double z,
                const Segment& seg, double r2, std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) {
    mask[i] = dist2_one(x0 + static_cast<double>(i) * step, y, z, seg) <= r2
                  ? 1
                  : 0;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", dist2_batch, min_dist2, row_within};
  return k;
}

}  // namespace tamp::simd
