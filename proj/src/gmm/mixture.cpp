#include "tamp/gmm/mixture.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tamp::gmm {

double log_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov) {
  const int d = static_cast<int>(x.size());
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd diff = x - mean;
  const Eigen::VectorXd sol = llt.matrixL().solve(diff);
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += std::log(llt.matrixL()(i, i));
  return -0.5 * sol.squaredNorm() - log_det -
         0.5 * d * std::log(2.0 * std::numbers::pi);
}

double mahalanobis2(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                    const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  return llt.matrixL().solve(x - mean).squaredNorm();
}

double Mixture::log_density(const Eigen::VectorXd& x) const {
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    terms[i] = std::log(comps[i].weight) +
               log_gaussian(x, comps[i].mean, comps[i].cov);
    max_term = std::max(max_term, terms[i]);
  }
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - max_term);
  return max_term + std::log(acc);
}

double Mixture::log_likelihood(const Eigen::MatrixXd& data) const {
  double ll = 0.0;
  for (int i = 0; i < data.rows(); ++i) {
    ll += log_density(data.row(i).transpose());
  }
  return ll;
}

double Mixture::min_mahalanobis2(const Eigen::VectorXd& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : comps) {
    best = std::min(best, mahalanobis2(x, c.mean, c.cov));
  }
  return best;
}

Eigen::MatrixXd clamp_spd(const Eigen::MatrixXd& m, double min_eigenvalue) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() >= min_eigenvalue) return sym;
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(min_eigenvalue);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace tamp::gmm
