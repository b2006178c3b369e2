#pragma once

#include <utility>
#include <vector>

#include "tamp/core/rng.hpp"
#include "tamp/gmm/mixture.hpp"

namespace tamp::gmm {

struct FitOptions {
  int max_iterations = 500;
  double tolerance = 1e-8;  // stop when the log-likelihood gain drops below
  int restarts = 2;
};

struct FitReport {
  Mixture mixture;
  std::vector<double> loglik_history;  // per accepted EM iteration
  int iterations = 0;
};

// EM fit of a full-covariance mixture. Data rows are samples, d in {3, 4}.
// Throws FitFailure on degenerate data, ValidationError on contract breaches.
FitReport fit_em(const Eigen::MatrixXd& data, int k, Rng rng,
                 const FitOptions& opts = {});

// -2 logLik + p ln N with p = K-1 + K d + K d(d+1)/2.
double bic(const Mixture& mixture, const Eigen::MatrixXd& data);

// argmin-BIC K over the range, ties (within 1e-12) broken toward smaller K.
int select_k(const Eigen::MatrixXd& data, const std::vector<int>& k_range,
             Rng rng, const FitOptions& opts = {});

// Tie-break helper behind select_k, exposed for direct testing.
int pick_best_k(const std::vector<std::pair<int, double>>& k_and_bic);

}  // namespace tamp::gmm
