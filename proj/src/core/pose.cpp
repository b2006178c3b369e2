#include "tamp/core/pose.hpp"

#include <algorithm>
#include <cmath>

namespace tamp {

Pose compose(const Pose& a, const Pose& b) {
  Quat q = a.rotation * b.rotation;
  q.normalize();
  return Pose(q, a.rotation * b.translation + a.translation);
}

Pose inverse(const Pose& p) {
  const Quat qi = p.rotation.conjugate();
  return Pose(qi, qi * (-p.translation));
}

double rotation_distance(const Pose& a, const Pose& b) {
  // Angle of the relative rotation; quaternion double cover handled by |dot|.
  const double d = std::min(1.0, std::abs(a.rotation.dot(b.rotation)));
  return 2.0 * std::acos(d);
}

double translation_distance(const Pose& a, const Pose& b) {
  return (a.translation - b.translation).norm();
}

}  // namespace tamp
