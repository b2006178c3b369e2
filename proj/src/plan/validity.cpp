#include "tamp/plan/validity.hpp"

#include <algorithm>
#include <cmath>

namespace tamp::plan {

namespace {

void refresh_capsules(const kin::RobotSpec& spec, const kin::FkResult& fk,
                      std::optional<double> payload_radius,
                      world::RobotBodies& bodies) {
  std::size_t idx = 0;
  for (std::size_t link = 0; link < spec.link_capsules.size(); ++link) {
    for (const kin::CapsuleSpec& local : spec.link_capsules[link]) {
      bodies.capsules[idx++] = world::transform_capsule(fk.link_poses[link], local);
    }
  }
  if (payload_radius) {
    bodies.capsules[idx] =
        world::Capsule{fk.ee.translation, fk.ee.translation, *payload_radius};
  }
}

}  // namespace

ValidityContext::ValidityContext(const kin::RobotSpec& robot,
                                 const SafetyParams& safety)
    : robot_(&robot), safety_(safety), check_margin_(safety.d_min) {}

void ValidityContext::set_other(const kin::RobotSpec* other,
                                const kin::JointConfig& q) {
  other_robot_ = other;
  pairs_dirty_ = true;
  if (other == nullptr) {
    other_bodies_.reset();
    return;
  }
  other_bodies_ = world::make_robot_bodies(*other, kin::forward_kinematics(*other, q));
}

world::RobotBodies ValidityContext::bodies_at(const kin::JointConfig& q) const {
  const kin::FkResult fk = kin::forward_kinematics(*robot_, q);
  std::size_t want = payload_radius_ ? 1u : 0u;
  for (const auto& link : robot_->link_capsules) want += link.size();
  if (scratch_.capsules.size() != want) {
    scratch_ = world::make_robot_bodies(*robot_, fk);
    if (payload_radius_) {
      world::attach_payload(scratch_, *payload_radius_, fk.ee.translation);
    }
    pairs_dirty_ = true;
  } else {
    refresh_capsules(*robot_, fk, payload_radius_, scratch_);
  }
  return scratch_;
}

const world::RobotBodies& ValidityContext::bodies_ref_at(
    const kin::JointConfig& q) const {
  bodies_at(q);
  return scratch_;
}

void ValidityContext::rebuild_pairs() const {
  static const world::AllowedCollisionMatrix kEmptyAcm;
  const world::AllowedCollisionMatrix& acm = acm_ ? *acm_ : kEmptyAcm;
  self_pairs_.clear();
  cross_pairs_.clear();
  const auto& own = scratch_;
  for (std::size_t i = 0; i < own.names.size(); ++i) {
    for (std::size_t j = i + 1; j < own.names.size(); ++j) {
      if (own.names[i] == own.names[j]) continue;
      if (acm.is_allowed(own.names[i], own.names[j])) continue;
      self_pairs_.push_back({i, j, own.capsules[i].radius + own.capsules[j].radius});
    }
  }
  if (other_bodies_) {
    for (std::size_t i = 0; i < own.names.size(); ++i) {
      for (std::size_t j = 0; j < other_bodies_->names.size(); ++j) {
        if (acm.is_allowed(own.names[i], other_bodies_->names[j])) continue;
        cross_pairs_.push_back(
            {i, j, own.capsules[i].radius + other_bodies_->capsules[j].radius});
      }
    }
  }
  pairs_dirty_ = false;
}

bool ValidityContext::margins_ok(const kin::JointConfig& q) const {
  const world::RobotBodies& bodies = bodies_ref_at(q);
  if (pairs_dirty_) rebuild_pairs();
  const double margin = check_margin_;
  for (const auto& p : self_pairs_) {
    const world::Capsule& c1 = bodies.capsules[p.i];
    const world::Capsule& c2 = bodies.capsules[p.j];
    if (world::segment_segment_distance(c1.p0, c1.p1, c2.p0, c2.p1) <
        margin + p.radius_sum) {
      return false;
    }
  }
  if (other_bodies_) {
    for (const auto& p : cross_pairs_) {
      const world::Capsule& c1 = bodies.capsules[p.i];
      const world::Capsule& c2 = other_bodies_->capsules[p.j];
      if (world::segment_segment_distance(c1.p0, c1.p1, c2.p0, c2.p1) <
          margin + p.radius_sum) {
        return false;
      }
    }
  }
  if (map_ != nullptr &&
      !world::env_clearance_at_least(bodies, *map_, margin)) {
    return false;
  }
  return true;
}

bool ValidityContext::state_valid(const kin::JointConfig& q) const {
  if (!kin::within_limits(*robot_, q)) return false;
  if (region_ != nullptr &&
      !region_->contains(kin::fk_ee(*robot_, q).translation)) {
    return false;
  }
  return margins_ok(q);
}

bool ValidityContext::edge_valid(const kin::JointConfig& a,
                                 const kin::JointConfig& b,
                                 double resolution) const {
  const double span = (b - a).lpNorm<Eigen::Infinity>();
  const int steps = std::max(1, static_cast<int>(std::ceil(span / resolution)));
  for (int i = 1; i < steps; ++i) {
    const double u = static_cast<double>(i) / steps;
    if (!margins_ok(a + u * (b - a))) return false;
  }
  return true;
}

double ValidityContext::total_margin_at(
    const kin::JointConfig& q, std::vector<world::NearCollision>* contacts,
    double* d_env_out, double* d_mutual_out) const {
  const world::RobotBodies& bodies = bodies_ref_at(q);
  double d_env = std::numeric_limits<double>::infinity();
  if (map_ != nullptr) {
    d_env = world::min_env_distance(bodies, *map_, safety_.epsilon, contacts)
                .distance;
  }
  static const world::AllowedCollisionMatrix kEmptyAcm;
  const world::AllowedCollisionMatrix& acm = acm_ ? *acm_ : kEmptyAcm;
  const world::RobotBodies& rhs = other_bodies_ ? *other_bodies_ : bodies;
  const auto mutual = world::min_mutual_distance(bodies, rhs, acm, safety_.epsilon);
  if (contacts) {
    contacts->insert(contacts->end(), mutual.contacts.begin(),
                     mutual.contacts.end());
  }
  if (d_env_out) *d_env_out = d_env;
  if (d_mutual_out) *d_mutual_out = mutual.distance;
  return world::total_margin(d_env, mutual.distance);
}

}  // namespace tamp::plan
