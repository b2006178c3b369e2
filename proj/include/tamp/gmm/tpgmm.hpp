#pragma once

#include <array>
#include <string>
#include <vector>

#include "tamp/core/pose.hpp"
#include "tamp/core/rng.hpp"
#include "tamp/gmm/fit.hpp"

namespace tamp::gmm {

// Task frames a demonstration (or a reproduction query) is parameterized by.
struct TaskFrames {
  FrameTransform start;
  FrameTransform goal;
  FrameTransform obstacle;

  const FrameTransform& operator[](int i) const {
    return i == 0 ? start : (i == 1 ? goal : obstacle);
  }
};

inline constexpr std::array<const char*, 3> kFrameLabels = {"start", "goal",
                                                            "obstacle"};

struct Demonstration {
  std::vector<double> times;
  std::vector<Vec3> points;  // world frame
  TaskFrames frames;
};

// Per-frame local mixtures sharing component correspondence and weights.
struct TpgmmModel {
  int k = 0;
  std::array<Mixture, 3> local;  // start / goal / obstacle frame
  std::string robot;
  std::string phase;  // "pick" | "place"
};

// High-likelihood task-space region induced by the frame-adapted mixture.
// Membership is a closed min-Mahalanobis test against the chi^2(3) 99% bound.
class RegionQ {
public:
  static constexpr double kDefaultThreshold = 11.345;  // chi^2_3 at 0.99

  RegionQ() = default;
  RegionQ(Mixture adapted, double mahalanobis_threshold = kDefaultThreshold);

  bool contains(const Vec3& p) const;
  double min_mahalanobis2(const Vec3& p) const;

  const Mixture& mixture() const { return adapted_; }
  double threshold() const { return threshold_; }
  bool empty() const { return adapted_.comps.empty(); }

private:
  Mixture adapted_;
  double threshold_ = kDefaultThreshold;
  // Cached precisions for the hot membership path.
  std::vector<Mat3> precisions_;
  std::vector<Vec3> means_;
};

// Fits one mixture per task frame with shared responsibilities (equivalently,
// EM on the stacked frame-local coordinates with block-diagonal covariance),
// so component k means the same motion segment in every frame.
TpgmmModel encode_demonstrations(const std::vector<Demonstration>& demos,
                                 int k, Rng rng, const FitOptions& opts = {});

// Frame adaptation: mean -> A mu + b, covariance -> A Sigma A^T per frame,
// then per-component precision-weighted fusion of the three adapted Gaussians.
RegionQ reproduce(const TpgmmModel& model, const TaskFrames& frames,
                  double threshold = RegionQ::kDefaultThreshold);

// Adapted (pre-fusion) parameters of one local mixture under one frame.
Mixture adapt_mixture(const Mixture& local, const FrameTransform& frame);

bool membership(const RegionQ& region, const Vec3& point);

// --- serialization -------------------------------------------------------

std::string model_to_json(const TpgmmModel& model);
TpgmmModel model_from_json(const std::string& text);

// Demonstration set on disk: one CSV per demo (columns t,x,y,z) plus a
// frames.json sidecar carrying the per-demo task frames.
void save_demonstrations(const std::vector<Demonstration>& demos,
                         const std::string& directory);
std::vector<Demonstration> load_demonstrations(const std::string& directory);

}  // namespace tamp::gmm
