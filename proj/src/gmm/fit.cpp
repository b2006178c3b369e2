#include "tamp/gmm/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tamp/core/errors.hpp"

namespace tamp::gmm {

namespace {

constexpr double kCovRidgeScale = 1e-9;  // added as ridge * trace/d per M-step
constexpr double kEigenFloor = 1e-9;

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data) {
  const Eigen::RowVectorXd mean = data.colwise().mean();
  Eigen::MatrixXd centered = data.rowwise() - mean;
  return (centered.transpose() * centered) / static_cast<double>(data.rows());
}

// k-means++ style seeding: spread initial means across the data.
std::vector<int> seed_indices(const Eigen::MatrixXd& data, int k, Rng& rng) {
  const int n = static_cast<int>(data.rows());
  std::vector<int> picks;
  picks.push_back(static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n))));
  Eigen::VectorXd d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(picks.size()) < k) {
    const Eigen::RowVectorXd last = data.row(picks.back());
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (data.row(i) - last).squaredNorm());
    }
    const double total = d2.sum();
    if (total <= 0.0) {
      picks.push_back(static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n))));
      continue;
    }
    double r = rng.uniform() * total;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      r -= d2[i];
      if (r <= 0.0) {
        chosen = i;
        break;
      }
    }
    picks.push_back(chosen);
  }
  return picks;
}

struct EmRun {
  Mixture mixture;
  std::vector<double> history;
  double final_ll = -std::numeric_limits<double>::infinity();
};

EmRun run_em(const Eigen::MatrixXd& data, int k, Rng rng,
             const FitOptions& opts) {
  const int n = static_cast<int>(data.rows());
  const int d = static_cast<int>(data.cols());
  const Eigen::MatrixXd base_cov =
      clamp_spd(sample_covariance(data), kEigenFloor);

  EmRun run;
  Mixture& mix = run.mixture;
  mix.comps.resize(static_cast<std::size_t>(k));
  const std::vector<int> seeds = seed_indices(data, k, rng);
  for (int j = 0; j < k; ++j) {
    auto& c = mix.comps[static_cast<std::size_t>(j)];
    c.weight = 1.0 / k;
    c.mean = data.row(seeds[static_cast<std::size_t>(j)]).transpose();
    c.cov = base_cov;
  }

  Eigen::MatrixXd log_resp(n, k);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // E-step.
    for (int j = 0; j < k; ++j) {
      const auto& c = mix.comps[static_cast<std::size_t>(j)];
      Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
      double log_det = 0.0;
      for (int i = 0; i < d; ++i) log_det += std::log(llt.matrixL()(i, i));
      const double log_norm =
          std::log(c.weight) - log_det - 0.5 * d * std::log(2.0 * std::numbers::pi);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = data.row(i).transpose() - c.mean;
        log_resp(i, j) =
            log_norm - 0.5 * llt.matrixL().solve(diff).squaredNorm();
      }
    }
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = log_resp.row(i).maxCoeff();
      const double s = (log_resp.row(i).array() - m).exp().sum();
      const double log_px = m + std::log(s);
      ll += log_px;
      log_resp.row(i) = (log_resp.row(i).array() - log_px).exp();
    }
    run.history.push_back(ll);
    run.final_ll = ll;
    if (iter > 0 && ll - prev_ll < opts.tolerance) break;
    prev_ll = ll;

    // M-step (log_resp now holds plain responsibilities).
    for (int j = 0; j < k; ++j) {
      auto& c = mix.comps[static_cast<std::size_t>(j)];
      const double nk = log_resp.col(j).sum();
      if (nk < 1e-10 * n) {
        // Collapsed component: reseed it on a data point.
        c.mean = data.row(static_cast<int>(rng.uniform_index(
                              static_cast<uint64_t>(n))))
                     .transpose();
        c.cov = base_cov;
        c.weight = 1.0 / n;
        continue;
      }
      c.weight = nk / n;
      c.mean = (data.transpose() * log_resp.col(j)) / nk;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = data.row(i).transpose() - c.mean;
        cov.noalias() += log_resp(i, j) * (diff * diff.transpose());
      }
      cov /= nk;
      cov += (kCovRidgeScale * cov.trace() / d) *
             Eigen::MatrixXd::Identity(d, d);
      c.cov = clamp_spd(cov, kEigenFloor);
    }
    double wsum = 0.0;
    for (auto& c : mix.comps) wsum += c.weight;
    for (auto& c : mix.comps) c.weight /= wsum;
  }
  return run;
}

}  // namespace

FitReport fit_em(const Eigen::MatrixXd& data, int k, Rng rng,
                 const FitOptions& opts) {
  const int n = static_cast<int>(data.rows());
  const int d = static_cast<int>(data.cols());
  if (d != 3 && d != 4) {
    throw ValidationError("fit_em: dimension must be 3 or 4, got " +
                          std::to_string(d));
  }
  if (n < 10 * k) {
    throw ValidationError("fit_em: need at least 10*K samples, got " +
                          std::to_string(n) + " for K=" + std::to_string(k));
  }
  if (sample_covariance(data).trace() < 1e-15) {
    throw FitFailure("fit_em: degenerate data (all samples identical)");
  }

  EmRun best;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    EmRun run = run_em(data, k, rng.fork(static_cast<uint64_t>(r)), opts);
    if (run.final_ll > best.final_ll) best = std::move(run);
  }
  FitReport report;
  report.mixture = std::move(best.mixture);
  report.loglik_history = std::move(best.history);
  report.iterations = static_cast<int>(report.loglik_history.size());
  return report;
}

double bic(const Mixture& mixture, const Eigen::MatrixXd& data) {
  const int k = mixture.k();
  const int d = mixture.dim();
  const double p = (k - 1) + k * d + k * d * (d + 1) / 2.0;
  return -2.0 * mixture.log_likelihood(data) +
         p * std::log(static_cast<double>(data.rows()));
}

int pick_best_k(const std::vector<std::pair<int, double>>& k_and_bic) {
  std::vector<std::pair<int, double>> sorted = k_and_bic;
  std::sort(sorted.begin(), sorted.end());
  int best_k = sorted.front().first;
  double best_bic = sorted.front().second;
  for (const auto& [kk, b] : sorted) {
    if (b < best_bic - 1e-12) {
      best_bic = b;
      best_k = kk;
    }
  }
  return best_k;
}

int select_k(const Eigen::MatrixXd& data, const std::vector<int>& k_range,
             Rng rng, const FitOptions& opts) {
  if (k_range.empty()) {
    throw ValidationError("select_k: empty K range");
  }
  std::vector<std::pair<int, double>> scores;
  for (int k : k_range) {
    const FitReport rep = fit_em(data, k, rng.fork(static_cast<uint64_t>(k)), opts);
    scores.emplace_back(k, bic(rep.mixture, data));
  }
  return pick_best_k(scores);
}

}  // namespace tamp::gmm
