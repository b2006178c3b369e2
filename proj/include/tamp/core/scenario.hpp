#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tamp/core/pose.hpp"
#include "tamp/kin/robot_spec.hpp"
#include "tamp/world/voxel_map.hpp"

namespace tamp {

struct SafetyParams {
  double epsilon = 0.15;           // near-collision threshold (m)
  double d_min = 0.01;             // hard safety margin (m)
  double voxel_resolution = 0.03;  // m
  double update_rate_hz = 10.0;    // scene refresh rate
};

struct ObjectShape {
  Vec3 extents{0.08, 0.08, 0.04};  // axis-aligned box, meters
};

struct SceneObject {
  std::string label;
  int instance_id = 0;
  Pose pose;
};

// Scripted moving body: sphere following a piecewise-linear position schedule.
struct DynamicObstacle {
  std::string name;
  double radius = 0.05;
  std::vector<std::pair<double, Vec3>> waypoints;  // (time s, position)

  Vec3 position_at(double t) const;
};

struct PriorityRow {
  int priority = 0;
  std::string label;
  sched::ToolType tool = sched::ToolType::kThreeFingerGripper;
};

struct Scenario {
  int version = 1;
  uint64_t seed = 0;
  std::vector<kin::RobotSpec> robots;
  std::vector<kin::JointConfig> home_configs;  // aligned with robots
  std::vector<SceneObject> objects;
  std::vector<DynamicObstacle> dynamic_obstacles;
  SafetyParams safety;
  world::Aabb workspace_bounds{Vec3(-2, -2, -1), Vec3(2, 2, 2)};
  std::map<std::string, ObjectShape> object_shapes;
  std::vector<PriorityRow> priority_table;  // empty -> built-in defaults

  const ObjectShape& shape_of(const std::string& label) const;
};

// Parses and fully validates a scenario document. ParseError names the
// offending path for schema problems; ValidationError for invariant breaches.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

std::string scenario_to_json(const Scenario& s);

// Capsules connecting consecutive joint origins, used when a robot entry
// does not list its collision geometry explicitly.
std::vector<std::vector<kin::CapsuleSpec>> default_link_capsules(
    const std::vector<kin::DhParam>& dh, const std::vector<double>& radii = {});

}  // namespace tamp
