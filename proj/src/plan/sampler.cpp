#include "tamp/plan/sampler.hpp"

namespace tamp::plan {

kin::JointConfig uniform_sample(const kin::RobotSpec& spec, Rng& rng) {
  kin::JointConfig q(static_cast<int>(spec.dof()));
  for (std::size_t i = 0; i < spec.dof(); ++i) {
    const auto& lim = spec.joint_limits[i];
    q[static_cast<int>(i)] = rng.uniform(lim.min, lim.max);
  }
  return q;
}

std::optional<kin::JointConfig> InformedSampler::sample(Rng& rng) {
  for (int attempt = 0; attempt < budget_; ++attempt) {
    ++stats_.draws;
    kin::JointConfig q = uniform_sample(*spec_, rng);
    if (region_->contains(kin::fk_ee(*spec_, q).translation)) {
      return q;
    }
    ++stats_.rejections;
  }
  ++stats_.starvations;
  return std::nullopt;
}

}  // namespace tamp::plan
