#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tamp::gmm {

struct GaussianComponent {
  double weight = 1.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct Mixture {
  std::vector<GaussianComponent> comps;

  int k() const { return static_cast<int>(comps.size()); }
  int dim() const { return comps.empty() ? 0 : static_cast<int>(comps[0].mean.size()); }

  double log_density(const Eigen::VectorXd& x) const;
  double log_likelihood(const Eigen::MatrixXd& data) const;  // rows = samples

  // Smallest squared Mahalanobis distance from x to any component mean.
  double min_mahalanobis2(const Eigen::VectorXd& x) const;
};

double log_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov);

double mahalanobis2(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov);

// Clamps eigenvalues of a symmetric matrix from below (regularization floor).
Eigen::MatrixXd clamp_spd(const Eigen::MatrixXd& m, double min_eigenvalue);

}  // namespace tamp::gmm
