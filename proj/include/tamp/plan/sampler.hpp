#pragma once

#include <optional>

#include "tamp/core/rng.hpp"
#include "tamp/gmm/tpgmm.hpp"
#include "tamp/kin/kinematics.hpp"

namespace tamp::plan {

kin::JointConfig uniform_sample(const kin::RobotSpec& spec, Rng& rng);

struct SamplerStats {
  uint64_t draws = 0;
  uint64_t rejections = 0;
  uint64_t starvations = 0;  // budget exhaustions (caller fell back to uniform)
};

// Rejection sampler over uniform joint draws: keeps configurations whose
// forward kinematics lands inside the region. Returns nullopt after the
// per-call rejection budget runs out.
class InformedSampler {
public:
  InformedSampler(const kin::RobotSpec& spec, const gmm::RegionQ& region,
                  int rejection_budget = 10000)
      : spec_(&spec), region_(&region), budget_(rejection_budget) {}

  std::optional<kin::JointConfig> sample(Rng& rng);

  const SamplerStats& stats() const { return stats_; }

private:
  const kin::RobotSpec* spec_;
  const gmm::RegionQ* region_;
  int budget_;
  SamplerStats stats_;
};

}  // namespace tamp::plan
