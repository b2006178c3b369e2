#pragma once

#include "tamp/plan/types.hpp"
#include "tamp/plan/validity.hpp"

namespace tamp::plan {

// Random-pair shortcut smoothing. Accepted shortcuts are re-discretized at
// step_size spacing and keep all path invariants (margins at step/4
// resolution, region membership of new waypoints when a region is set).
// Deterministic given the seed; output is never longer than the input.
Path shortcut(const Path& path, const ValidityContext& validity,
              int iterations, uint64_t seed, double step_size = 0.1);

}  // namespace tamp::plan
