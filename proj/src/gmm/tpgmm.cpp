#include "tamp/gmm/tpgmm.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "tamp/core/errors.hpp"

namespace tamp::gmm {

namespace fs = std::filesystem;
using nlohmann::json;

RegionQ::RegionQ(Mixture adapted, double mahalanobis_threshold)
    : adapted_(std::move(adapted)), threshold_(mahalanobis_threshold) {
  precisions_.reserve(adapted_.comps.size());
  means_.reserve(adapted_.comps.size());
  for (const auto& c : adapted_.comps) {
    precisions_.push_back(Mat3(c.cov).inverse());
    means_.push_back(Vec3(c.mean));
  }
}

double RegionQ::min_mahalanobis2(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const Vec3 d = p - means_[i];
    best = std::min(best, d.dot(precisions_[i] * d));
  }
  return best;
}

bool RegionQ::contains(const Vec3& p) const {
  return min_mahalanobis2(p) <= threshold_;
}

bool membership(const RegionQ& region, const Vec3& point) {
  return region.contains(point);
}

namespace {

constexpr double kEigenFloor = 1e-9;
constexpr double kRidgeScale = 1e-9;

// Stacked frame-local coordinates of all demo points: one row per point,
// 9 columns (3 frames x 3 dims).
Eigen::MatrixXd stack_local(const std::vector<Demonstration>& demos) {
  std::size_t n = 0;
  for (const auto& d : demos) n += d.points.size();
  Eigen::MatrixXd out(static_cast<int>(n), 9);
  int row = 0;
  for (const auto& d : demos) {
    for (const Vec3& p : d.points) {
      for (int f = 0; f < 3; ++f) {
        out.block<1, 3>(row, 3 * f) = d.frames[f].apply_inverse(p).transpose();
      }
      ++row;
    }
  }
  return out;
}

bool demos_degenerate(const std::vector<Demonstration>& demos) {
  // All demos identical point-for-point leaves nothing to generalize.
  const auto& ref = demos.front();
  for (const auto& d : demos) {
    if (d.points.size() != ref.points.size()) return false;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
      if ((d.points[i] - ref.points[i]).norm() > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace

TpgmmModel encode_demonstrations(const std::vector<Demonstration>& demos,
                                 int k, Rng rng, const FitOptions& opts) {
  if (demos.size() < 5) {
    throw ValidationError("encode_demonstrations: need at least 5 demos, got " +
                          std::to_string(demos.size()));
  }
  for (const auto& d : demos) {
    if (d.points.empty()) {
      throw ValidationError("encode_demonstrations: empty demonstration");
    }
    if (d.frames.start.orthonormality_error() > 1e-9 ||
        d.frames.goal.orthonormality_error() > 1e-9 ||
        d.frames.obstacle.orthonormality_error() > 1e-9) {
      throw ValidationError("encode_demonstrations: non-rigid task frame");
    }
  }
  if (demos_degenerate(demos)) {
    throw FitFailure("encode_demonstrations: all demonstrations identical");
  }

  const Eigen::MatrixXd data = stack_local(demos);
  const int n = static_cast<int>(data.rows());
  if (n < 10 * k) {
    throw ValidationError("encode_demonstrations: too few points for K=" +
                          std::to_string(k));
  }

  // Init: contiguous time chunks, which for trajectory data spreads the
  // components along the motion. Deterministic.
  std::vector<Eigen::VectorXd> means(static_cast<std::size_t>(k));
  std::vector<Eigen::MatrixXd> covs(static_cast<std::size_t>(k));
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(k, 1.0 / k);
  {
    const Eigen::RowVectorXd gmean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - gmean;
    Eigen::MatrixXd gcov = (centered.transpose() * centered) / n;
    gcov = clamp_spd(gcov, kEigenFloor);
    for (int j = 0; j < k; ++j) {
      const int lo = j * n / k;
      const int hi = std::max(lo + 1, (j + 1) * n / k);
      means[static_cast<std::size_t>(j)] =
          data.middleRows(lo, hi - lo).colwise().mean().transpose();
      covs[static_cast<std::size_t>(j)] = gcov;
    }
  }
  (void)rng;  // init is deterministic; the seed only matters for fallbacks

  // EM with block-diagonal (3x3 per frame) covariance structure.
  Eigen::MatrixXd log_resp(n, k);
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    for (int j = 0; j < k; ++j) {
      double log_norm = std::log(weights[j]) -
                        0.5 * 9.0 * std::log(2.0 * std::numbers::pi);
      std::array<Eigen::LLT<Eigen::MatrixXd>, 3> llts;
      for (int f = 0; f < 3; ++f) {
        const Eigen::MatrixXd block =
            covs[static_cast<std::size_t>(j)].block<3, 3>(3 * f, 3 * f);
        llts[static_cast<std::size_t>(f)].compute(block);
        for (int i = 0; i < 3; ++i) {
          log_norm -=
              std::log(llts[static_cast<std::size_t>(f)].matrixL()(i, i));
        }
      }
      for (int i = 0; i < n; ++i) {
        double quad = 0.0;
        for (int f = 0; f < 3; ++f) {
          const Eigen::Vector3d diff =
              data.block<1, 3>(i, 3 * f).transpose() -
              means[static_cast<std::size_t>(j)].segment<3>(3 * f);
          quad += llts[static_cast<std::size_t>(f)]
                      .matrixL()
                      .solve(diff)
                      .squaredNorm();
        }
        log_resp(i, j) = log_norm - 0.5 * quad;
      }
    }
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      const double m = log_resp.row(i).maxCoeff();
      const double log_px = m + std::log((log_resp.row(i).array() - m).exp().sum());
      ll += log_px;
      log_resp.row(i) = (log_resp.row(i).array() - log_px).exp();
    }
    if (iter > 0 && ll - prev_ll < opts.tolerance) break;
    prev_ll = ll;

    for (int j = 0; j < k; ++j) {
      const double nk = log_resp.col(j).sum();
      if (nk < 1e-10 * n) continue;  // keep previous parameters
      weights[j] = nk / n;
      means[static_cast<std::size_t>(j)] =
          (data.transpose() * log_resp.col(j)) / nk;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(9, 9);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd diff =
            data.row(i).transpose() - means[static_cast<std::size_t>(j)];
        cov.noalias() += log_resp(i, j) * (diff * diff.transpose());
      }
      cov /= nk;
      // Keep only the per-frame blocks; cross-frame covariance is not modeled.
      Eigen::MatrixXd blocked = Eigen::MatrixXd::Zero(9, 9);
      for (int f = 0; f < 3; ++f) {
        Eigen::MatrixXd block = cov.block<3, 3>(3 * f, 3 * f);
        block += (kRidgeScale * block.trace() / 3.0) * Eigen::Matrix3d::Identity();
        blocked.block<3, 3>(3 * f, 3 * f) = clamp_spd(block, kEigenFloor);
      }
      covs[static_cast<std::size_t>(j)] = blocked;
    }
    weights /= weights.sum();
  }

  TpgmmModel model;
  model.k = k;
  for (int f = 0; f < 3; ++f) {
    Mixture& mix = model.local[static_cast<std::size_t>(f)];
    mix.comps.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      auto& c = mix.comps[static_cast<std::size_t>(j)];
      c.weight = weights[j];
      c.mean = means[static_cast<std::size_t>(j)].segment<3>(3 * f);
      c.cov = covs[static_cast<std::size_t>(j)].block<3, 3>(3 * f, 3 * f);
    }
  }
  return model;
}

Mixture adapt_mixture(const Mixture& local, const FrameTransform& frame) {
  Mixture out;
  out.comps.reserve(local.comps.size());
  for (const auto& c : local.comps) {
    GaussianComponent a;
    a.weight = c.weight;
    a.mean = frame.A * c.mean + frame.b;
    a.cov = frame.A * c.cov * frame.A.transpose();
    out.comps.push_back(std::move(a));
  }
  return out;
}

RegionQ reproduce(const TpgmmModel& model, const TaskFrames& frames,
                  double threshold) {
  for (int f = 0; f < 3; ++f) {
    if (frames[f].orthonormality_error() > 1e-9) {
      throw ValidationError("reproduce: non-rigid task frame");
    }
  }
  std::array<Mixture, 3> adapted;
  for (int f = 0; f < 3; ++f) {
    adapted[static_cast<std::size_t>(f)] =
        adapt_mixture(model.local[static_cast<std::size_t>(f)], frames[f]);
  }
  Mixture combined;
  combined.comps.resize(static_cast<std::size_t>(model.k));
  double wsum = 0.0;
  for (int j = 0; j < model.k; ++j) {
    Mat3 precision = Mat3::Zero();
    Vec3 info = Vec3::Zero();
    for (int f = 0; f < 3; ++f) {
      const auto& c = adapted[static_cast<std::size_t>(f)].comps[static_cast<std::size_t>(j)];
      const Mat3 prec = Mat3(c.cov).inverse();
      precision += prec;
      info += prec * Vec3(c.mean);
    }
    auto& out = combined.comps[static_cast<std::size_t>(j)];
    const Mat3 cov = precision.inverse();
    out.cov = 0.5 * (cov + cov.transpose());
    out.mean = cov * info;
    out.weight = model.local[0].comps[static_cast<std::size_t>(j)].weight;
    wsum += out.weight;
  }
  for (auto& c : combined.comps) c.weight /= wsum;
  return RegionQ(std::move(combined), threshold);
}

// --- serialization -------------------------------------------------------

namespace {

json mixture_to_json(const Mixture& mix) {
  json comps = json::array();
  for (const auto& c : mix.comps) {
    json jc;
    jc["weight"] = c.weight;
    jc["mean"] = std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size());
    std::vector<double> cov;  // row-major
    for (int r = 0; r < c.cov.rows(); ++r) {
      for (int col = 0; col < c.cov.cols(); ++col) cov.push_back(c.cov(r, col));
    }
    jc["cov"] = cov;
    comps.push_back(jc);
  }
  return comps;
}

Mixture mixture_from_json(const json& j) {
  Mixture mix;
  for (const auto& jc : j) {
    GaussianComponent c;
    c.weight = jc.at("weight").get<double>();
    const auto mean = jc.at("mean").get<std::vector<double>>();
    c.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                               static_cast<int>(mean.size()));
    const auto cov = jc.at("cov").get<std::vector<double>>();
    const int d = static_cast<int>(mean.size());
    if (static_cast<int>(cov.size()) != d * d) {
      throw ParseError("model: covariance size mismatch");
    }
    c.cov.resize(d, d);
    for (int r = 0; r < d; ++r) {
      for (int col = 0; col < d; ++col) c.cov(r, col) = cov[static_cast<std::size_t>(r * d + col)];
    }
    mix.comps.push_back(std::move(c));
  }
  return mix;
}

}  // namespace

std::string model_to_json(const TpgmmModel& model) {
  json j;
  j["version"] = 1;
  j["type"] = "tpgmm";
  j["k"] = model.k;
  j["robot"] = model.robot;
  j["phase"] = model.phase;
  for (int f = 0; f < 3; ++f) {
    j["frames"][kFrameLabels[static_cast<std::size_t>(f)]] =
        mixture_to_json(model.local[static_cast<std::size_t>(f)]);
  }
  return j.dump(2);
}

TpgmmModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  TpgmmModel model;
  try {
    model.k = j.at("k").get<int>();
    model.robot = j.value("robot", "");
    model.phase = j.value("phase", "");
    for (int f = 0; f < 3; ++f) {
      model.local[static_cast<std::size_t>(f)] = mixture_from_json(
          j.at("frames").at(kFrameLabels[static_cast<std::size_t>(f)]));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  return model;
}

namespace {

json frame_to_json(const FrameTransform& f) {
  std::vector<double> a;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a.push_back(f.A(r, c));
  }
  return json{{"A", a}, {"b", {f.b.x(), f.b.y(), f.b.z()}}};
}

FrameTransform frame_from_json(const json& j) {
  FrameTransform f;
  const auto a = j.at("A").get<std::vector<double>>();
  if (a.size() != 9) throw ParseError("frames: A must have 9 entries");
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) f.A(r, c) = a[static_cast<std::size_t>(3 * r + c)];
  }
  const auto b = j.at("b").get<std::vector<double>>();
  if (b.size() != 3) throw ParseError("frames: b must have 3 entries");
  f.b = Vec3(b[0], b[1], b[2]);
  return f;
}

}  // namespace

void save_demonstrations(const std::vector<Demonstration>& demos,
                         const std::string& directory) {
  fs::create_directories(directory);
  json sidecar;
  sidecar["version"] = 1;
  sidecar["demos"] = json::array();
  for (std::size_t i = 0; i < demos.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "demo_%03zu.csv", i);
    std::ofstream os(fs::path(directory) / name);
    os << "t,x,y,z\n";
    os.precision(17);
    for (std::size_t p = 0; p < demos[i].points.size(); ++p) {
      os << demos[i].times[p] << ',' << demos[i].points[p].x() << ','
         << demos[i].points[p].y() << ',' << demos[i].points[p].z() << '\n';
    }
    json entry;
    entry["file"] = name;
    entry["frames"]["start"] = frame_to_json(demos[i].frames.start);
    entry["frames"]["goal"] = frame_to_json(demos[i].frames.goal);
    entry["frames"]["obstacle"] = frame_to_json(demos[i].frames.obstacle);
    sidecar["demos"].push_back(entry);
  }
  std::ofstream os(fs::path(directory) / "frames.json");
  os << sidecar.dump(2);
}

std::vector<Demonstration> load_demonstrations(const std::string& directory) {
  const fs::path sidecar_path = fs::path(directory) / "frames.json";
  std::ifstream is(sidecar_path);
  if (!is) {
    throw ParseError("demonstrations: cannot open " + sidecar_path.string());
  }
  json sidecar;
  try {
    is >> sidecar;
  } catch (const json::exception& e) {
    throw ParseError("demonstrations: " + sidecar_path.string() + ": " + e.what());
  }
  std::vector<Demonstration> demos;
  for (const auto& entry : sidecar.at("demos")) {
    Demonstration d;
    d.frames.start = frame_from_json(entry.at("frames").at("start"));
    d.frames.goal = frame_from_json(entry.at("frames").at("goal"));
    d.frames.obstacle = frame_from_json(entry.at("frames").at("obstacle"));
    const fs::path csv = fs::path(directory) / entry.at("file").get<std::string>();
    std::ifstream cs(csv);
    if (!cs) throw ParseError("demonstrations: cannot open " + csv.string());
    std::string line;
    std::getline(cs, line);  // header
    while (std::getline(cs, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      double t, x, y, z;
      char comma;
      if (!(ls >> t >> comma >> x >> comma >> y >> comma >> z)) {
        throw ParseError("demonstrations: malformed row in " + csv.string());
      }
      d.times.push_back(t);
      d.points.emplace_back(x, y, z);
    }
    if (d.points.empty()) {
      throw ParseError("demonstrations: empty file " + csv.string());
    }
    demos.push_back(std::move(d));
  }
  return demos;
}

}  // namespace tamp::gmm
