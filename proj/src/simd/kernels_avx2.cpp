#include "tamp/simd/kernels.hpp"

#ifdef __AVX2__

#include <immintrin.h>

#include <cstring>
#include <limits>

namespace tamp::simd {
namespace {

struct SegVecs {
  __m256d ax, ay, az, dx, dy, dz, inv_dd, zero, one;
};

inline SegVecs broadcast(const Segment& s) {
  SegVecs v;
  v.ax = _mm256_set1_pd(s.ax);
  v.ay = _mm256_set1_pd(s.ay);
  v.az = _mm256_set1_pd(s.az);
  v.dx = _mm256_set1_pd(s.dx);
  v.dy = _mm256_set1_pd(s.dy);
  v.dz = _mm256_set1_pd(s.dz);
  v.inv_dd = _mm256_set1_pd(s.inv_dd);
  v.zero = _mm256_setzero_pd();
  v.one = _mm256_set1_pd(1.0);
  return v;
}

inline __m256d dist2_lanes(__m256d px, __m256d py, __m256d pz,
                           const SegVecs& v) {
  const __m256d wx = _mm256_sub_pd(px, v.ax);
  const __m256d wy = _mm256_sub_pd(py, v.ay);
  const __m256d wz = _mm256_sub_pd(pz, v.az);
  __m256d t = _mm256_mul_pd(wx, v.dx);
  t = _mm256_fmadd_pd(wy, v.dy, t);
  t = _mm256_fmadd_pd(wz, v.dz, t);
  t = _mm256_mul_pd(t, v.inv_dd);
  t = _mm256_min_pd(_mm256_max_pd(t, v.zero), v.one);
  const __m256d ex = _mm256_fnmadd_pd(t, v.dx, wx);
  const __m256d ey = _mm256_fnmadd_pd(t, v.dy, wy);
  const __m256d ez = _mm256_fnmadd_pd(t, v.dz, wz);
  __m256d d2 = _mm256_mul_pd(ex, ex);
  d2 = _mm256_fmadd_pd(ey, ey, d2);
  d2 = _mm256_fmadd_pd(ez, ez, d2);
  return d2;
}

inline double dist2_one(double px, double py, double pz, const Segment& s) {
  const double wx = px - s.ax;
  const double wy = py - s.ay;
  const double wz = pz - s.az;
  double t = (wx * s.dx + wy * s.dy + wz * s.dz) * s.inv_dd;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  const double ex = wx - t * s.dx;
  const double ey = wy - t * s.dy;
  const double ez = wz - t * s.dz;
  return ex * ex + ey * ey + ez * ez;
}

void dist2_batch(const double* xs, const double* ys, const double* zs,
                 std::size_t n, const Segment& seg, double* out) {
  const SegVecs v = broadcast(seg);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d2 = dist2_lanes(_mm256_loadu_pd(xs + i),
                                   _mm256_loadu_pd(ys + i),
                                   _mm256_loadu_pd(zs + i), v);
    _mm256_storeu_pd(out + i, d2);
  }
  for (; i < n; ++i) out[i] = dist2_one(xs[i], ys[i], zs[i], seg);
}

double min_dist2(const double* xs, const double* ys, const double* zs,
                 std::size_t n, const Segment& seg, std::size_t* argmin) {
  const SegVecs v = broadcast(seg);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d idx_step = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d2 = dist2_lanes(_mm256_loadu_pd(xs + i),
                                   _mm256_loadu_pd(ys + i),
                                   _mm256_loadu_pd(zs + i), v);
    const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
    idx = _mm256_add_pd(idx, idx_step);
  }
  double lane_val[4], lane_idx[4];
  _mm256_storeu_pd(lane_val, best);
  _mm256_storeu_pd(lane_idx, best_idx);
  double best_s = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (int l = 0; l < 4; ++l) {
    if (lane_val[l] < best_s ||
        (lane_val[l] == best_s && lane_idx[l] < static_cast<double>(best_i))) {
      best_s = lane_val[l];
      best_i = static_cast<std::size_t>(lane_idx[l]);
    }
  }
  for (; i < n; ++i) {
    const double d2 = dist2_one(xs[i], ys[i], zs[i], seg);
    if (d2 < best_s) {
      best_s = d2;
      best_i = i;
    }
  }
  if (argmin) *argmin = best_i;
  return best_s;
}

void row_within(double x0, double step, std::size_t n, double y, double z,
                const Segment& seg, double r2, std::uint8_t* mask) {
  const SegVecs v = broadcast(seg);
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d vz = _mm256_set1_pd(z);
  const __m256d vr2 = _mm256_set1_pd(r2);
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vx0 = _mm256_set1_pd(x0);
  __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d lane_step = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // mul+add (not FMA) so the ramp rounds exactly like the scalar variant
    const __m256d px = _mm256_add_pd(vx0, _mm256_mul_pd(lane, vstep));
    const __m256d d2 = dist2_lanes(px, vy, vz, v);
    const __m256d le = _mm256_cmp_pd(d2, vr2, _CMP_LE_OQ);
    const int bits = _mm256_movemask_pd(le);
    mask[i + 0] = (bits >> 0) & 1;
    mask[i + 1] = (bits >> 1) & 1;
    mask[i + 2] = (bits >> 2) & 1;
    mask[i + 3] = (bits >> 3) & 1;
    lane = _mm256_add_pd(lane, lane_step);
  }
  for (; i < n; ++i) {
    mask[i] = dist2_one(x0 + static_cast<double>(i) * step, y, z, seg) <= r2
                  ? 1
                  : 0;
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{"avx2", dist2_batch, min_dist2, row_within};
  return k;
}

}  // namespace tamp::simd

#endif  // __AVX2__
