#include "tamp/core/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tamp/core/errors.hpp"

namespace tamp {

using nlohmann::json;

Vec3 DynamicObstacle::position_at(double t) const {
  if (waypoints.empty()) return Vec3::Zero();
  if (t <= waypoints.front().first) return waypoints.front().second;
  if (t >= waypoints.back().first) return waypoints.back().second;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].first) {
      const auto& [t0, p0] = waypoints[i - 1];
      const auto& [t1, p1] = waypoints[i];
      const double u = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
      return p0 + u * (p1 - p0);
    }
  }
  return waypoints.back().second;
}

const ObjectShape& Scenario::shape_of(const std::string& label) const {
  static const ObjectShape kDefault;
  const auto it = object_shapes.find(label);
  return it == object_shapes.end() ? kDefault : it->second;
}

std::vector<std::vector<kin::CapsuleSpec>> default_link_capsules(
    const std::vector<kin::DhParam>& dh, const std::vector<double>& radii) {
  std::vector<std::vector<kin::CapsuleSpec>> out(dh.size());
  for (std::size_t i = 0; i < dh.size(); ++i) {
    const auto& p = dh[i];
    kin::CapsuleSpec cap;
    cap.p0 = Vec3::Zero();
    // Previous joint origin expressed in this link's frame; independent of q.
    cap.p1 = -Vec3(p.a, p.d * std::sin(p.alpha), p.d * std::cos(p.alpha));
    cap.radius = i < radii.size() ? radii[i] : 0.05;
    out[i].push_back(cap);
  }
  return out;
}

namespace {

[[noreturn]] void fail_parse(const std::string& path, const std::string& what) {
  throw ParseError("scenario: " + path + ": " + what);
}

[[noreturn]] void fail_validate(const std::string& path, const std::string& what) {
  throw ValidationError("scenario: " + path + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) fail_parse(path + "." + key, "missing field");
  return *it;
}

double need_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number()) fail_parse(path + "." + key, "expected a number");
  return v.get<double>();
}

Vec3 parse_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail_parse(path, "expected [x, y, z]");
  for (const auto& v : j) {
    if (!v.is_number()) fail_parse(path, "expected numeric entries");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Pose parse_pose(const json& j, const std::string& path) {
  if (!j.is_object()) fail_parse(path, "expected a pose object");
  const Vec3 t = parse_vec3(need(j, "position", path), path + ".position");
  Quat q = Quat::Identity();
  if (j.contains("quaternion")) {
    const json& jq = j["quaternion"];
    if (!jq.is_array() || jq.size() != 4) {
      fail_parse(path + ".quaternion", "expected [w, x, y, z]");
    }
    q = Quat(jq[0].get<double>(), jq[1].get<double>(), jq[2].get<double>(),
             jq[3].get<double>());
    if (q.norm() < 1e-9) fail_validate(path + ".quaternion", "zero quaternion");
  }
  return Pose(q, t);
}

kin::RobotSpec parse_robot(const json& j, const std::string& path) {
  kin::RobotSpec spec;
  spec.name = need(j, "name", path).get<std::string>();
  spec.base_pose = parse_pose(need(j, "base_pose", path), path + ".base_pose");
  spec.tool = sched::tool_from_string(
      j.value("tool", std::string("three-finger-gripper")));

  const json& dh = need(j, "dh_params", path);
  if (!dh.is_array()) fail_parse(path + ".dh_params", "expected an array");
  for (std::size_t i = 0; i < dh.size(); ++i) {
    const json& row = dh[i];
    const std::string rp = path + ".dh_params[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != 4) {
      fail_parse(rp, "expected [a, alpha, d, theta_offset]");
    }
    spec.dh_params.push_back(kin::DhParam{row[0].get<double>(),
                                          row[1].get<double>(),
                                          row[2].get<double>(),
                                          row[3].get<double>()});
  }
  if (spec.dh_params.size() != 6) {
    fail_validate(path + ".dh_params", "expected exactly 6 joints");
  }

  const json& limits = need(j, "joint_limits", path);
  if (!limits.is_array() || limits.size() != spec.dh_params.size()) {
    fail_parse(path + ".joint_limits", "expected one [min, max] per joint");
  }
  for (std::size_t i = 0; i < limits.size(); ++i) {
    const std::string lp = path + ".joint_limits[" + std::to_string(i) + "]";
    if (!limits[i].is_array() || limits[i].size() != 2) {
      fail_parse(lp, "expected [min, max]");
    }
    const double lo = limits[i][0].get<double>();
    const double hi = limits[i][1].get<double>();
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo >= hi) {
      fail_validate(lp, "joint limits must be finite with min < max");
    }
    spec.joint_limits.push_back(kin::JointLimit{lo, hi});
  }

  const auto parse_per_joint = [&](const char* key, double fallback) {
    std::vector<double> vals(spec.dof(), fallback);
    if (j.contains(key)) {
      const json& arr = j[key];
      if (!arr.is_array() || arr.size() != spec.dof()) {
        fail_parse(path + "." + key, "expected one value per joint");
      }
      for (std::size_t i = 0; i < arr.size(); ++i) {
        vals[i] = arr[i].get<double>();
        if (vals[i] <= 0.0) {
          fail_validate(path + "." + key, "limits must be positive");
        }
      }
    }
    return vals;
  };
  spec.velocity_limits = parse_per_joint("velocity_limits", 0.5);
  spec.acceleration_limits = parse_per_joint("acceleration_limits", 1.0);

  if (j.contains("link_capsules")) {
    const json& lc = j["link_capsules"];
    if (!lc.is_array() || lc.size() != spec.dof()) {
      fail_parse(path + ".link_capsules", "expected one capsule list per link");
    }
    spec.link_capsules.resize(spec.dof());
    for (std::size_t i = 0; i < lc.size(); ++i) {
      for (std::size_t c = 0; c < lc[i].size(); ++c) {
        const json& jc = lc[i][c];
        const std::string cp = path + ".link_capsules[" + std::to_string(i) +
                               "][" + std::to_string(c) + "]";
        kin::CapsuleSpec cap;
        cap.p0 = parse_vec3(need(jc, "p0", cp), cp + ".p0");
        cap.p1 = parse_vec3(need(jc, "p1", cp), cp + ".p1");
        cap.radius = need_number(jc, "radius", cp);
        if (cap.radius <= 0.0) fail_validate(cp + ".radius", "radius must be > 0");
        spec.link_capsules[i].push_back(cap);
      }
    }
  } else {
    spec.link_capsules = default_link_capsules(spec.dh_params);
  }

  if (j.contains("drop_zone")) {
    spec.drop_zone = parse_pose(j["drop_zone"], path + ".drop_zone");
  }
  return spec;
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail_parse("$", "expected a JSON object");

  Scenario s;
  const json& version = need(j, "version", "$");
  if (!version.is_number_integer()) fail_parse("$.version", "expected an integer");
  s.version = version.get<int>();
  if (s.version != 1) fail_validate("$.version", "unsupported schema version");

  s.seed = j.value("seed", 0ULL);

  if (j.contains("workspace_bounds")) {
    const json& wb = j["workspace_bounds"];
    s.workspace_bounds.min = parse_vec3(need(wb, "min", "$.workspace_bounds"),
                                        "$.workspace_bounds.min");
    s.workspace_bounds.max = parse_vec3(need(wb, "max", "$.workspace_bounds"),
                                        "$.workspace_bounds.max");
    if ((s.workspace_bounds.min.array() >= s.workspace_bounds.max.array()).any()) {
      fail_validate("$.workspace_bounds", "min must be strictly below max");
    }
  }

  if (j.contains("safety")) {
    const json& sf = j["safety"];
    s.safety.epsilon = sf.value("epsilon", 0.15);
    s.safety.d_min = sf.value("d_min", 0.01);
    s.safety.voxel_resolution = sf.value("voxel_resolution", 0.03);
    s.safety.update_rate_hz = sf.value("update_rate_hz", 10.0);
  }
  if (s.safety.d_min < 0.0 || s.safety.d_min >= s.safety.epsilon) {
    fail_validate("$.safety", "requires 0 <= d_min < epsilon");
  }
  if (s.safety.voxel_resolution <= 0.0) {
    fail_validate("$.safety.voxel_resolution", "must be > 0");
  }
  if (s.safety.update_rate_hz <= 0.0) {
    fail_validate("$.safety.update_rate_hz", "must be > 0");
  }

  const json& robots = need(j, "robots", "$");
  if (!robots.is_array() || robots.empty()) {
    fail_parse("$.robots", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < robots.size(); ++i) {
    s.robots.push_back(
        parse_robot(robots[i], "$.robots[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    for (std::size_t k = i + 1; k < s.robots.size(); ++k) {
      if ((s.robots[i].base_pose.translation - s.robots[k].base_pose.translation)
              .norm() < 1e-9) {
        fail_validate("$.robots", "robot base poses must be pairwise distinct");
      }
      if (s.robots[i].name == s.robots[k].name) {
        fail_validate("$.robots", "robot names must be unique");
      }
    }
  }

  s.home_configs.resize(s.robots.size());
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    s.home_configs[i] = kin::JointConfig::Zero(static_cast<int>(s.robots[i].dof()));
    const json& jr = robots[i];
    if (jr.contains("home")) {
      const json& h = jr["home"];
      if (!h.is_array() || h.size() != s.robots[i].dof()) {
        fail_parse("$.robots[" + std::to_string(i) + "].home",
                   "expected one angle per joint");
      }
      for (std::size_t q = 0; q < h.size(); ++q) {
        s.home_configs[i][static_cast<int>(q)] = h[q].get<double>();
      }
    }
  }

  if (j.contains("objects")) {
    const json& objs = j["objects"];
    if (!objs.is_array()) fail_parse("$.objects", "expected an array");
    for (std::size_t i = 0; i < objs.size(); ++i) {
      const std::string op = "$.objects[" + std::to_string(i) + "]";
      SceneObject o;
      o.label = need(objs[i], "label", op).get<std::string>();
      o.instance_id = need(objs[i], "instance_id", op).get<int>();
      o.pose = parse_pose(need(objs[i], "pose", op), op + ".pose");
      if (!s.workspace_bounds.contains(o.pose.translation)) {
        fail_validate(op + ".pose", "object outside workspace bounds");
      }
      s.objects.push_back(std::move(o));
    }
  }

  if (j.contains("dynamic_obstacles")) {
    const json& dyn = j["dynamic_obstacles"];
    if (!dyn.is_array()) fail_parse("$.dynamic_obstacles", "expected an array");
    for (std::size_t i = 0; i < dyn.size(); ++i) {
      const std::string dp = "$.dynamic_obstacles[" + std::to_string(i) + "]";
      DynamicObstacle d;
      d.name = dyn[i].value("name", "obstacle" + std::to_string(i));
      const std::string shape = dyn[i].value("shape", std::string("sphere"));
      if (shape != "sphere") fail_validate(dp + ".shape", "only spheres supported");
      d.radius = need_number(dyn[i], "radius", dp);
      if (d.radius <= 0.0) fail_validate(dp + ".radius", "must be > 0");
      const json& wps = need(dyn[i], "waypoints", dp);
      if (!wps.is_array() || wps.empty()) {
        fail_parse(dp + ".waypoints", "expected a non-empty array");
      }
      double prev_t = -std::numeric_limits<double>::infinity();
      for (std::size_t w = 0; w < wps.size(); ++w) {
        const std::string wp = dp + ".waypoints[" + std::to_string(w) + "]";
        const double t = need_number(wps[w], "t", wp);
        if (t < prev_t) fail_validate(wp + ".t", "timestamps must be ordered");
        prev_t = t;
        d.waypoints.emplace_back(
            t, parse_vec3(need(wps[w], "position", wp), wp + ".position"));
      }
      s.dynamic_obstacles.push_back(std::move(d));
    }
  }

  if (j.contains("object_shapes")) {
    for (const auto& [label, js] : j["object_shapes"].items()) {
      ObjectShape shape;
      shape.extents = parse_vec3(need(js, "extents", "$.object_shapes." + label),
                                 "$.object_shapes." + label + ".extents");
      if ((shape.extents.array() <= 0.0).any()) {
        fail_validate("$.object_shapes." + label, "extents must be positive");
      }
      s.object_shapes[label] = shape;
    }
  }

  if (j.contains("priority_table")) {
    std::set<int> seen;
    std::set<std::string> labels;
    for (std::size_t i = 0; i < j["priority_table"].size(); ++i) {
      const json& row = j["priority_table"][i];
      const std::string rp = "$.priority_table[" + std::to_string(i) + "]";
      PriorityRow r;
      r.priority = static_cast<int>(need_number(row, "priority", rp));
      r.label = need(row, "label", rp).get<std::string>();
      r.tool = sched::tool_from_string(need(row, "tool", rp).get<std::string>());
      if (!seen.insert(r.priority).second) {
        fail_validate(rp + ".priority", "priority scores must be unique");
      }
      if (!labels.insert(r.label).second) {
        fail_validate(rp + ".label", "labels must be unique");
      }
      s.priority_table.push_back(std::move(r));
    }
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("scenario: cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return load_scenario(buf.str());
}

namespace {

json pose_to_json(const Pose& p) {
  return json{{"position", {p.translation.x(), p.translation.y(), p.translation.z()}},
              {"quaternion",
               {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()}}};
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["version"] = s.version;
  j["seed"] = s.seed;
  j["workspace_bounds"] = {
      {"min", {s.workspace_bounds.min.x(), s.workspace_bounds.min.y(), s.workspace_bounds.min.z()}},
      {"max", {s.workspace_bounds.max.x(), s.workspace_bounds.max.y(), s.workspace_bounds.max.z()}}};
  j["safety"] = {{"epsilon", s.safety.epsilon},
                 {"d_min", s.safety.d_min},
                 {"voxel_resolution", s.safety.voxel_resolution},
                 {"update_rate_hz", s.safety.update_rate_hz}};
  j["robots"] = json::array();
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& r = s.robots[i];
    json jr;
    jr["name"] = r.name;
    jr["base_pose"] = pose_to_json(r.base_pose);
    jr["tool"] = sched::to_string(r.tool);
    for (const auto& p : r.dh_params) {
      jr["dh_params"].push_back({p.a, p.alpha, p.d, p.theta_offset});
    }
    for (const auto& l : r.joint_limits) {
      jr["joint_limits"].push_back({l.min, l.max});
    }
    jr["velocity_limits"] = r.velocity_limits;
    jr["acceleration_limits"] = r.acceleration_limits;
    jr["link_capsules"] = json::array();
    for (const auto& link : r.link_capsules) {
      json jl = json::array();
      for (const auto& c : link) {
        jl.push_back({{"p0", {c.p0.x(), c.p0.y(), c.p0.z()}},
                      {"p1", {c.p1.x(), c.p1.y(), c.p1.z()}},
                      {"radius", c.radius}});
      }
      jr["link_capsules"].push_back(jl);
    }
    jr["drop_zone"] = pose_to_json(r.drop_zone);
    std::vector<double> home(r.dof());
    for (std::size_t q = 0; q < r.dof(); ++q) {
      home[q] = s.home_configs[i][static_cast<int>(q)];
    }
    jr["home"] = home;
    j["robots"].push_back(jr);
  }
  j["objects"] = json::array();
  for (const auto& o : s.objects) {
    j["objects"].push_back({{"label", o.label},
                            {"instance_id", o.instance_id},
                            {"pose", pose_to_json(o.pose)}});
  }
  j["dynamic_obstacles"] = json::array();
  for (const auto& d : s.dynamic_obstacles) {
    json jd;
    jd["name"] = d.name;
    jd["shape"] = "sphere";
    jd["radius"] = d.radius;
    for (const auto& [t, p] : d.waypoints) {
      jd["waypoints"].push_back({{"t", t}, {"position", {p.x(), p.y(), p.z()}}});
    }
    j["dynamic_obstacles"].push_back(jd);
  }
  for (const auto& [label, shape] : s.object_shapes) {
    j["object_shapes"][label] = {
        {"extents", {shape.extents.x(), shape.extents.y(), shape.extents.z()}}};
  }
  for (const auto& row : s.priority_table) {
    j["priority_table"].push_back({{"priority", row.priority},
                                   {"label", row.label},
                                   {"tool", sched::to_string(row.tool)}});
  }
  return j.dump(2);
}

}  // namespace tamp
