#include "tamp/plan/metrics.hpp"

namespace tamp::plan {

double ee_path_length(const kin::RobotSpec& spec, const Trajectory& traj) {
  double len = 0.0;
  Vec3 prev = Vec3::Zero();
  bool first = true;
  for (const auto& s : traj.samples) {
    const Vec3 p = kin::fk_ee(spec, s.q).translation;
    if (!first) len += (p - prev).norm();
    prev = p;
    first = false;
  }
  return len;
}

std::vector<Vec3> ee_trace(const kin::RobotSpec& spec, const Trajectory& traj) {
  std::vector<Vec3> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    out.push_back(kin::fk_ee(spec, s.q).translation);
  }
  return out;
}

void export_trajectory_csv(const kin::RobotSpec& spec, const Trajectory& traj,
                           std::ostream& os) {
  os << "t";
  for (std::size_t j = 0; j < spec.dof(); ++j) os << ",q" << (j + 1);
  os << ",x,y,z\n";
  for (const auto& s : traj.samples) {
    os << s.t;
    for (int j = 0; j < s.q.size(); ++j) os << ',' << s.q[j];
    const Vec3 p = kin::fk_ee(spec, s.q).translation;
    os << ',' << p.x() << ',' << p.y() << ',' << p.z() << '\n';
  }
}

}  // namespace tamp::plan
