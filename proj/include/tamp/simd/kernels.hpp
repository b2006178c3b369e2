#pragma once

#include <cstddef>
#include <cstdint>

namespace tamp::simd {

// Precomputed segment for batched distance queries.
struct Segment {
  double ax, ay, az;        // endpoint a
  double dx, dy, dz;        // b - a
  double inv_dd;            // 1 / dot(d,d), 0 for degenerate segments
};

Segment make_segment(double ax, double ay, double az,
                     double bx, double by, double bz);

// Batched kernels over SoA point arrays. These are the arithmetic inner loops
// of the voxel distance queries and the trajectory voxelizer; each has a scalar
// reference implementation and an AVX2 variant selected at runtime.
struct Kernels {
  const char* name;

  // out[i] = squared distance from point i to the segment.
  void (*point_segment_dist2)(const double* xs, const double* ys,
                              const double* zs, std::size_t n,
                              const Segment& seg, double* out);

  // Minimum squared distance over all points; *argmin gets the index of the
  // first point attaining it (lane order for the vector variants).
  double (*min_point_segment_dist2)(const double* xs, const double* ys,
                                    const double* zs, std::size_t n,
                                    const Segment& seg, std::size_t* argmin);

  // Row variant for voxelization: points (x0 + i*step, y, z), i in [0, n).
  // mask[i] = 1 if dist2 <= r2 else 0.
  void (*row_segment_within)(double x0, double step, std::size_t n, double y,
                             double z, const Segment& seg, double r2,
                             std::uint8_t* mask);
};

const Kernels& scalar_kernels();
bool avx2_available();
const Kernels& avx2_kernels();  // valid only when avx2_available()

// Runtime-selected variant: AVX2 when the CPU supports it and the environment
// variable TAMPKIT_FORCE_SCALAR is unset.
const Kernels& active_kernels();

}  // namespace tamp::simd
