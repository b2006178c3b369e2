#include "tamp/exec/case_studies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tamp/exec/demos.hpp"
#include "tamp/plan/time_param.hpp"

namespace tamp::exec {

namespace {

constexpr double kPi = std::numbers::pi;

kin::RobotSpec make_arm(const std::string& name, const Pose& base,
                        sched::ToolType tool, const Pose& drop) {
  kin::RobotSpec spec;
  spec.name = name;
  spec.base_pose = base;
  spec.tool = tool;
  spec.drop_zone = drop;
  spec.dh_params = {
      {0.0, kPi / 2, 0.1807, 0.0}, {-0.6127, 0.0, 0.0, 0.0},
      {-0.57155, 0.0, 0.0, 0.0},   {0.0, kPi / 2, 0.17415, 0.0},
      {0.0, -kPi / 2, 0.11985, 0.0}, {0.0, 0.0, 0.11655, 0.0},
  };
  spec.joint_limits.assign(6, kin::JointLimit{-2.0 * kPi, 2.0 * kPi});
  spec.velocity_limits = {0.6, 0.6, 0.8, 0.9, 0.9, 0.9};
  spec.acceleration_limits = {1.5, 1.5, 2.0, 2.5, 2.5, 2.5};
  spec.link_capsules = default_link_capsules(
      spec.dh_params, {0.07, 0.06, 0.05, 0.045, 0.045, 0.04});
  // Tool body on the wrist flange, along +z of the last frame.
  spec.link_capsules[5].push_back(
      kin::CapsuleSpec{Vec3(0, 0, 0), Vec3(0, 0, 0.12), 0.04});
  return spec;
}

kin::JointConfig home_config() {
  kin::JointConfig q(6);
  q << 1.57, -2.0, 2.0, -1.57, -1.57, 0.0;
  return q;
}

Scenario base_scene(uint64_t seed) {
  Scenario s;
  s.version = 1;
  s.seed = seed;
  s.workspace_bounds = world::Aabb{Vec3(-1.6, -1.8, -1.0), Vec3(1.6, 1.8, 1.8)};
  s.safety = SafetyParams{};  // paper bands: 0.15 / 0.01 / 0.03 / 10 Hz

  const Quat face_north = Quat(Eigen::AngleAxisd(kPi / 2, Vec3::UnitZ()));
  const Quat face_south = Quat(Eigen::AngleAxisd(-kPi / 2, Vec3::UnitZ()));
  s.robots.push_back(make_arm(
      "R1", Pose(face_north, Vec3(0.0, -0.85, 0.0)),
      sched::ToolType::kThreeFingerGripper,
      Pose(Quat(0, 1, 0, 0), Vec3(-0.55, -0.95, 0.35))));
  s.robots.push_back(make_arm(
      "R2", Pose(face_south, Vec3(0.0, 0.85, 0.0)),
      sched::ToolType::kVacuumGripper,
      Pose(Quat(0, 1, 0, 0), Vec3(0.55, 0.95, 0.35))));
  s.home_configs = {home_config(), home_config()};

  s.object_shapes["cable"] = ObjectShape{Vec3(0.25, 0.05, 0.04)};
  s.object_shapes["busbar"] = ObjectShape{Vec3(0.20, 0.05, 0.03)};
  s.object_shapes["service plug"] = ObjectShape{Vec3(0.08, 0.08, 0.07)};
  s.object_shapes["leaf cell"] = ObjectShape{Vec3(0.22, 0.14, 0.05)};

  s.priority_table = {
      {1, "screws", sched::ToolType::kThreeFingerGripper},
      {2, "leaf cell", sched::ToolType::kVacuumGripper},
      {3, "service plug", sched::ToolType::kThreeFingerGripper},
      {4, "busbar", sched::ToolType::kThreeFingerGripper},
      {5, "cable", sched::ToolType::kThreeFingerGripper},
  };
  return s;
}

SceneObject obj(const std::string& label, int id, double x, double y, double z) {
  return SceneObject{label, id, Pose(Quat::Identity(), Vec3(x, y, z))};
}

DynamicObstacle static_sphere(const std::string& name, double radius,
                              const Vec3& p) {
  return DynamicObstacle{name, radius, {{0.0, p}}};
}

}  // namespace

Scenario make_case3_scenario(uint64_t seed) {
  Scenario s = base_scene(seed);
  // R1 (3F) row on the south side, R2 (vacuum) row on the north side.
  s.objects = {
      obj("cable", 1, -0.40, -0.18, 0.12),
      obj("busbar", 1, 0.00, -0.24, 0.12),
      obj("service plug", 1, 0.40, -0.18, 0.12),
      obj("leaf cell", 1, -0.40, 0.18, 0.12),
      obj("leaf cell", 2, 0.00, 0.24, 0.12),
      obj("leaf cell", 3, 0.40, 0.18, 0.12),
  };
  // Pack housing: static clutter between the rows.
  s.dynamic_obstacles = {
      static_sphere("housing-a", 0.09, Vec3(-0.22, 0.0, 0.42)),
      static_sphere("housing-b", 0.09, Vec3(0.22, 0.0, 0.42)),
  };
  return s;
}

Scenario make_case1_scenario(uint64_t seed) {
  Scenario s = base_scene(seed);
  s.objects.clear();
  s.dynamic_obstacles.clear();
  return s;
}

Scenario make_case2_scenario(uint64_t seed) {
  Scenario s = base_scene(seed);
  s.objects = {obj("leaf cell", 1, -0.40, 0.20, 0.12)};
  s.dynamic_obstacles.clear();
  return s;
}

std::array<Pose, 2> case1_targets(const Scenario& s) {
  Rng rng(s.seed ^ 0xCA5E0001u);
  const double jx = rng.uniform(-0.06, 0.06);
  const double jy = rng.uniform(-0.06, 0.06);
  // Crossing corridors: R1 reaches into the north-east, R2 into the
  // south-west; straight end-effector lines intersect near the center.
  return {Pose(Quat(0, 1, 0, 0), Vec3(0.45 + jx, 0.30 + jy, 0.35)),
          Pose(Quat(0, 1, 0, 0), Vec3(-0.45 + jx, -0.30 + jy, 0.35))};
}

Scenario randomize_scenario(const Scenario& base, uint64_t seed) {
  Scenario s = base;
  s.seed = seed;
  Rng rng(seed ^ 0x5EEDBA5Eu);
  constexpr double kJitter = 0.05;
  constexpr double kMinSpacing = 0.28;
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    for (int attempt = 0; attempt < 32; ++attempt) {
      const Vec3 cand = base.objects[i].pose.translation +
                        Vec3(rng.uniform(-kJitter, kJitter),
                             rng.uniform(-kJitter, kJitter), 0.0);
      bool ok = true;
      for (std::size_t j = 0; j < i; ++j) {
        if ((s.objects[j].pose.translation - cand).norm() < kMinSpacing) {
          ok = false;
          break;
        }
      }
      if (ok) {
        s.objects[i].pose.translation = cand;
        break;
      }
    }
  }
  for (auto& dyn : s.dynamic_obstacles) {
    const Vec3 jitter(rng.uniform(-0.04, 0.04), rng.uniform(-0.04, 0.04),
                      rng.uniform(-0.03, 0.03));
    for (auto& [t, p] : dyn.waypoints) p += jitter;
  }
  return s;
}

std::array<std::pair<Vec3, Vec3>, 2> pick_zones(const Scenario& s) {
  std::array<std::pair<Vec3, Vec3>, 2> zones;
  for (int r = 0; r < 2; ++r) {
    const Vec3 home_ee =
        kin::fk_ee(s.robots[static_cast<std::size_t>(r)],
                   s.home_configs[static_cast<std::size_t>(r)])
            .translation;
    Vec3 goal = Vec3::Zero();
    int n = 0;
    const auto table = sched::PriorityTable::for_scenario(s);
    for (const auto& o : s.objects) {
      if (table.row_for(o.label).tool == s.robots[static_cast<std::size_t>(r)].tool) {
        goal += o.pose.translation + Vec3(0, 0, 0.18);
        ++n;
      }
    }
    if (n == 0) {
      // No objects (Case I style): train toward the crossing targets.
      goal = case1_targets(s)[static_cast<std::size_t>(r)].translation;
    } else {
      goal /= n;
    }
    zones[static_cast<std::size_t>(r)] = {home_ee, goal};
  }
  return zones;
}

std::array<std::pair<Vec3, Vec3>, 2> place_zones(const Scenario& s) {
  const auto picks = pick_zones(s);
  std::array<std::pair<Vec3, Vec3>, 2> zones;
  for (int r = 0; r < 2; ++r) {
    zones[static_cast<std::size_t>(r)] = {
        picks[static_cast<std::size_t>(r)].second,
        s.robots[static_cast<std::size_t>(r)].drop_zone.translation};
  }
  return zones;
}

ModelSet fit_benchmark_models(const Scenario& s, uint64_t seed, int k) {
  ModelSet set;
  const auto picks = pick_zones(s);
  const auto places = place_zones(s);
  for (int r = 0; r < 2; ++r) {
    for (const auto& [phase, zones] :
         {std::make_pair(std::string("pick"), picks),
          std::make_pair(std::string("place"), places)}) {
      const auto& [from, to] = zones[static_cast<std::size_t>(r)];
      DemoGenParams params;
      params.stations = k;
      const DemonstrationSet demos = make_training_set(
          from, to, 0.18, 10, 150,
          seed ^ (static_cast<uint64_t>(r) << 8) ^
              static_cast<uint64_t>(phase == "place" ? 0xBEEF : 0xFACE),
          params);
      gmm::TpgmmModel model = gmm::encode_demonstrations(
          demos.demos, k, Rng(seed ^ 0x60D));
      model.robot = s.robots[static_cast<std::size_t>(r)].name;
      model.phase = phase;
      set.models[{r, phase}] = std::move(model);
    }
  }
  return set;
}

CaseRun run_case1(const Scenario& s, const ExecOptions& opt) {
  ExecOptions o = opt;
  o.record_deviation = true;
  Executor exec(s, o);
  const auto targets = case1_targets(s);
  for (int r = 0; r < 2; ++r) {
    ExecTask task;
    task.kind = ExecTask::Kind::kReach;
    task.reach_target = targets[static_cast<std::size_t>(r)];
    exec.set_tasks(r, {task});
  }
  CaseRun out;
  out.report = exec.run();
  for (std::size_t r = 0; r < out.report.robots.size() && r < 2; ++r) {
    out.deviations[r] = out.report.robots[r].deviation;
  }
  return out;
}

CaseRun run_case2(const Scenario& s, const ExecOptions& opt, EventLog* log_out) {
  Executor exec(s, opt);

  // Scripted disturbance: robot 0 shuttles its wrist (payload attached)
  // through the transport corridor of robot 1.
  Rng rng(s.seed ^ 0xCA5E0002u);
  const Vec3 pick_p = s.objects.front().pose.translation;
  const Vec3 drop_p = s.robots[1].drop_zone.translation;
  const Vec3 mid = 0.5 * (pick_p + drop_p) + Vec3(0, -0.05, 0.22);
  plan::Path script;
  script.waypoints.push_back(s.home_configs[0]);
  kin::JointConfig seed_q = s.home_configs[0];
  Rng ik_rng = rng.fork(7);
  for (int i = 0; i < 3; ++i) {
    const Vec3 p = mid + Vec3(rng.uniform(-0.15, 0.15), rng.uniform(-0.12, 0.12),
                              rng.uniform(-0.08, 0.08));
    const auto ik = kin::inverse_kinematics(
        s.robots[0], Pose(Quat(0, 1, 0, 0), p), seed_q, ik_rng);
    if (!ik.success) continue;
    // Keep scripted joint steps modest so the loop stays smooth.
    script.waypoints.push_back(ik.q);
    seed_q = ik.q;
  }
  script.waypoints.push_back(s.home_configs[0]);
  kin::RobotSpec slow = s.robots[0];
  for (auto& v : slow.velocity_limits) v *= 0.35;
  const plan::Trajectory loop = plan::time_parameterize(script, slow);
  exec.set_scripted_motion(0, loop);
  exec.set_initial_payload(0, 0.06);

  // Robot 1 transport task.
  const auto table = sched::PriorityTable::for_scenario(s);
  const auto& obj = s.objects.front();
  sched::TaskObject task_obj;
  task_obj.label = obj.label;
  task_obj.instance_id = obj.instance_id;
  task_obj.pose = obj.pose;
  task_obj.required_tool = table.row_for(obj.label).tool;
  task_obj.priority = table.row_for(obj.label).priority;
  exec.set_tasks(1, {ExecTask{ExecTask::Kind::kPickPlace, task_obj, Pose()}});

  CaseRun out;
  out.report = exec.run();
  if (log_out != nullptr) *log_out = exec.log();
  for (std::size_t r = 0; r < out.report.robots.size() && r < 2; ++r) {
    out.deviations[r] = out.report.robots[r].deviation;
  }
  return out;
}

}  // namespace tamp::exec
