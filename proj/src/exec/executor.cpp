#include "tamp/exec/executor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tamp/avoid/tick.hpp"
#include "tamp/exec/demos.hpp"
#include "tamp/plan/metrics.hpp"
#include "tamp/plan/shortcut.hpp"
#include "tamp/plan/time_param.hpp"

namespace tamp::exec {

namespace {

constexpr double kArriveTol = 1e-2;       // m, grasp/place proximity
constexpr double kSteerSpeedMin = 0.05;   // m/s
constexpr double kSteerSpeedMax = 0.4;    // m/s
constexpr int kMaxSteerTicks = 80;        // give up steering and hold

// Tool-down end-effector orientation used for grasps and drops.
const Quat kToolDown{0.0, 1.0, 0.0, 0.0};

enum class Phase {
  kIdle,
  kPlanning,
  kMoving,
  kGrasping,
  kPlacing,
  kScripted,
  kStopped,
  kDone,
};

enum class Stage { kToPick, kToPlace, kReach };

enum class ObjState { kInScene, kGrasped, kPlaced };

// Surface point cloud of an oriented box, spaced at roughly `spacing`.
std::vector<Vec3> box_shell_points(const Pose& pose, const Vec3& extents,
                                   double spacing) {
  std::vector<Vec3> pts;
  const Vec3 half = 0.5 * extents;
  const auto steps = [&](double len) {
    return std::max(2, static_cast<int>(std::ceil(len / spacing)) + 1);
  };
  const int nx = steps(extents.x()), ny = steps(extents.y()), nz = steps(extents.z());
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int iz = 0; iz < nz; ++iz) {
        const bool on_face = ix == 0 || ix == nx - 1 || iy == 0 ||
                             iy == ny - 1 || iz == 0 || iz == nz - 1;
        if (!on_face) continue;
        const Vec3 local(-half.x() + extents.x() * ix / (nx - 1),
                         -half.y() + extents.y() * iy / (ny - 1),
                         -half.z() + extents.z() * iz / (nz - 1));
        pts.push_back(pose.apply(local));
      }
    }
  }
  return pts;
}

std::vector<Vec3> sphere_shell_points(const Vec3& center, double radius,
                                      double spacing) {
  std::vector<Vec3> pts;
  const int n_lat = std::max(3, static_cast<int>(std::ceil(std::numbers::pi * radius / spacing)));
  for (int i = 0; i <= n_lat; ++i) {
    const double lat = std::numbers::pi * (static_cast<double>(i) / n_lat - 0.5);
    const double ring_r = radius * std::cos(lat);
    const int n_lon = std::max(
        1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * std::max(ring_r, 1e-6) / spacing)));
    for (int k = 0; k < n_lon; ++k) {
      const double lon = 2.0 * std::numbers::pi * k / n_lon;
      pts.push_back(center + Vec3(ring_r * std::cos(lon), ring_r * std::sin(lon),
                                  radius * std::sin(lat)));
    }
  }
  return pts;
}

}  // namespace

struct Executor::Impl {
  const Scenario* scenario;
  ExecOptions opt;
  Rng rng;
  EventLog log;
  double sim_time = 0.0;
  double scene_dt;
  double makespan = 0.0;
  int replan_count = 0, stop_count = 0, steer_count = 0;
  int margin_violations = 0, penetrations = 0;

  struct ObjectRt {
    const SceneObject* obj;
    ObjState state = ObjState::kInScene;
    int grasped_by = -1;
    std::vector<int64_t> shell_keys;  // static voxel keys at scene resolution
  };
  std::vector<ObjectRt> objects;

  struct RobotRt {
    const kin::RobotSpec* spec = nullptr;
    int index = 0;
    kin::JointConfig q;
    Phase phase = Phase::kIdle;
    Stage stage = Stage::kToPick;
    std::vector<ExecTask> queue;
    std::size_t task_idx = 0;
    int current_object = -1;  // index into objects, -1 for reach tasks
    plan::Trajectory traj;
    double traj_time = 0.0;
    plan::Trajectory pending;           // becomes active when planning ends
    double phase_until = 0.0;
    std::optional<double> payload_radius;
    world::VoxelMap env_map;            // excludes own target and payloads
    std::unique_ptr<plan::ValidityContext> validity;
    gmm::RegionQ region;                // current informed region
    bool region_active = false;
    int attempts = 0;
    int plan_episodes = 0;
    bool steer_mode = false;
    Vec3 steer_v = Vec3::Zero();
    double steer_speed = 0.1;
    int steer_ticks = 0;
    bool want_replan_after_stop = false;
    double task_start_time = 0.0;
    double task_path_len = 0.0;
    double total_path_len = 0.0;
    Vec3 last_ee = Vec3::Zero();
    std::vector<Vec3> trace;
    std::vector<Vec3> first_task_trace;
    bool first_task_recording = false;
    bool first_task_recorded = false;
    std::optional<plan::Trajectory> reference;
    std::vector<double> deviation;
    std::optional<plan::Trajectory> scripted;
    double scripted_period = 0.0;
    std::unique_ptr<world::SweptAccumulator> swept;
    std::vector<ObjectReport> object_reports;
    std::vector<std::string> unfinished;
    std::set<sched::TaskKey> requeued_once;
  };
  std::vector<RobotRt> robots;
  world::AllowedCollisionMatrix acm;

  Impl(const Scenario& s, const ExecOptions& o)
      : scenario(&s), opt(o), rng(o.run_seed ^ s.seed) {
    scene_dt = 1.0 / s.safety.update_rate_hz;
    acm = world::default_acm(s.robots[0].name,
                             s.robots.size() > 1 ? s.robots[1].name : "");
    for (const auto& obj : s.objects) {
      ObjectRt rt;
      rt.obj = &obj;
      const auto pts = box_shell_points(
          obj.pose, s.shape_of(obj.label).extents, 0.5 * s.safety.voxel_resolution);
      world::VoxelMap tmp(Vec3::Zero(), s.safety.voxel_resolution, s.workspace_bounds);
      tmp.insert_points(pts);
      rt.shell_keys.assign(tmp.cell_keys().begin(), tmp.cell_keys().end());
      std::sort(rt.shell_keys.begin(), rt.shell_keys.end());
      objects.push_back(std::move(rt));
    }
    robots.resize(s.robots.size());
    for (std::size_t r = 0; r < s.robots.size(); ++r) {
      RobotRt& rt = robots[r];
      rt.spec = &s.robots[r];
      rt.index = static_cast<int>(r);
      rt.q = s.home_configs[r];
      rt.env_map = world::VoxelMap(Vec3::Zero(), s.safety.voxel_resolution,
                                   s.workspace_bounds);
      rt.validity = std::make_unique<plan::ValidityContext>(*rt.spec, s.safety);
      rt.validity->set_acm(&acm);
      rt.last_ee = kin::fk_ee(*rt.spec, rt.q).translation;
      if (opt.record_swept) {
        rt.swept = std::make_unique<world::SweptAccumulator>(
            s.safety.voxel_resolution);
        rt.swept->add_config(*rt.spec, rt.q);
      }
      rt.trace.push_back(rt.last_ee);
    }
    rebuild_env_maps();
  }

  // --- world bookkeeping --------------------------------------------------

  void rebuild_env_maps() {
    for (auto& rt : robots) {
      rt.env_map.clear();
      for (std::size_t i = 0; i < objects.size(); ++i) {
        if (objects[i].state != ObjState::kInScene) continue;
        if (static_cast<int>(i) == rt.current_object) continue;
        for (const int64_t key : objects[i].shell_keys) {
          rt.env_map.insert_cell(world::unpack_cell(key));
        }
      }
      for (const auto& dyn : scenario->dynamic_obstacles) {
        const auto pts = sphere_shell_points(dyn.position_at(sim_time), dyn.radius,
                                             0.5 * scenario->safety.voxel_resolution);
        rt.env_map.insert_points(pts);
      }
    }
  }

  Pose grasp_pose(const SceneObject& obj) const {
    const Vec3 ext = scenario->shape_of(obj.label).extents;
    const double tool_len = 0.13;  // wrist origin clearance above the part
    return Pose(kToolDown,
                obj.pose.translation + Vec3(0, 0, 0.5 * ext.z() + tool_len + 0.01));
  }

  Pose task_target(const RobotRt& rt) const {
    const ExecTask& task = rt.queue[rt.task_idx];
    if (task.kind == ExecTask::Kind::kReach) return task.reach_target;
    if (rt.stage == Stage::kToPick) {
      return grasp_pose(*objects[static_cast<std::size_t>(rt.current_object)].obj);
    }
    return rt.spec->drop_zone;
  }

  // --- monitoring ----------------------------------------------------------

  struct Margins {
    double d_env = std::numeric_limits<double>::infinity();
    double d_mutual = std::numeric_limits<double>::infinity();
    double d_total = std::numeric_limits<double>::infinity();
    std::vector<world::NearCollision> contacts;
  };

  Margins margins_for(int r, const world::RobotBodies& own,
                      const world::RobotBodies* other) {
    Margins m;
    RobotRt& rt = robots[static_cast<std::size_t>(r)];
    const double eps = scenario->safety.epsilon;
    const auto env =
        world::min_env_distance(own, rt.env_map, eps, &m.contacts);
    m.d_env = env.distance;
    // Live dynamic obstacles (monitoring does not wait for the 10 Hz map).
    for (const auto& dyn : scenario->dynamic_obstacles) {
      const Vec3 c = dyn.position_at(sim_time);
      for (std::size_t i = 0; i < own.capsules.size(); ++i) {
        const world::Capsule& cap = own.capsules[i];
        Vec3 wa, wb;
        const double d = world::capsule_distance(
            cap, world::Capsule{c, c, dyn.radius}, &wa, &wb);
        if (d < m.d_env) m.d_env = d;
        if (d <= eps) {
          m.contacts.push_back(world::NearCollision{own.names[i], dyn.name, d, wa, wb});
        }
      }
    }
    if (other != nullptr) {
      const auto mutual = world::min_mutual_distance(own, *other, acm, eps);
      m.d_mutual = mutual.distance;
      for (const auto& nc : mutual.contacts) m.contacts.push_back(nc);
    }
    m.d_total = world::total_margin(m.d_env, m.d_mutual);
    return m;
  }

  world::RobotBodies bodies_of(int r) {
    RobotRt& rt = robots[static_cast<std::size_t>(r)];
    const kin::FkResult fk = kin::forward_kinematics(*rt.spec, rt.q);
    world::RobotBodies b = world::make_robot_bodies(*rt.spec, fk);
    if (rt.payload_radius) {
      world::attach_payload(b, *rt.payload_radius, fk.ee.translation);
    }
    return b;
  }

  // --- planning ------------------------------------------------------------

  Vec3 threat_position(const RobotRt& rt, const Vec3& start, const Vec3& goal) const {
    const Vec3 mid = 0.5 * (start + goal);
    Vec3 best = mid + Vec3(0, 0, 0.4);  // harmless default above the corridor
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& other : robots) {
      if (other.index == rt.index) continue;
      const Vec3 p = kin::fk_ee(*other.spec, other.q).translation;
      const double d = (p - mid).norm();
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
    for (const auto& dyn : scenario->dynamic_obstacles) {
      const Vec3 p = dyn.position_at(sim_time);
      const double d = (p - mid).norm();
      if (d < best_d) {
        best_d = d;
        best = p;
      }
    }
    return best;
  }

  bool plan_to(RobotRt& rt, const Pose& target, bool allow_informed) {
    rt.validity->set_map(&rt.env_map);
    if (robots.size() > 1) {
      const RobotRt& other = robots[static_cast<std::size_t>(1 - rt.index)];
      rt.validity->set_other(other.spec, other.q);
    }
    if (rt.payload_radius) {
      rt.validity->set_payload(*rt.payload_radius);
    } else {
      rt.validity->clear_payload();
    }

    const bool informed = allow_informed &&
                          opt.planner == PlannerKind::kGmmInformed &&
                          opt.models != nullptr;
    rt.region_active = false;
    if (informed) {
      const std::string phase = rt.stage == Stage::kToPlace ? "place" : "pick";
      const gmm::TpgmmModel* model = opt.models->find(rt.index, phase);
      if (model != nullptr) {
        const Vec3 start_p = kin::fk_ee(*rt.spec, rt.q).translation;
        const gmm::TaskFrames frames = make_task_frames(
            start_p, target.translation,
            threat_position(rt, start_p, target.translation));
        rt.region = gmm::reproduce(*model, frames);
        rt.region_active = true;
      }
    }
    const double clearance = opt.plan_clearance >= 0.0
                                 ? opt.plan_clearance
                                 : scenario->safety.epsilon + 0.01;

    // Tiered attempts: prefer the informed region and the wide clearance,
    // relax toward the hard d_min floor only when the scene forces it.
    struct Tier {
      bool use_region;
      double margin;
    };
    std::vector<Tier> tiers;
    if (rt.region_active) {
      tiers.push_back({true, clearance});
      tiers.push_back({true, scenario->safety.d_min});
    }
    tiers.push_back({false, clearance});
    tiers.push_back({false, scenario->safety.d_min});

    plan::PlanResult res;
    bool used_region = false;
    for (const Tier& tier : tiers) {
      rt.validity->set_check_margin(tier.margin);
      rt.validity->set_region(tier.use_region ? &rt.region : nullptr);
      plan::PlanRequest req;
      req.robot = rt.spec;
      req.start = rt.q;
      req.goal_pose = target;
      req.region = tier.use_region ? &rt.region : nullptr;
      req.validity = rt.validity.get();
      req.step_size = opt.step_size;
      req.timeout_s = opt.plan_timeout_s;
      req.seed = rng.fork(static_cast<uint64_t>(rt.index) * 1000003u +
                          static_cast<uint64_t>(++rt.plan_episodes))
                     .next_u64();
      res = plan::plan_rrt_connect(req);
      if (res.ok()) {
        used_region = tier.use_region;
        plan::Path smoothed =
            plan::shortcut(res.path, *rt.validity, opt.shortcut_iterations,
                           req.seed ^ 0x5bd1e995u, opt.step_size);
        rt.pending = plan::time_parameterize(smoothed, *rt.spec);
        break;
      }
      log.append({sim_time, rt.spec->name, "plan-retry", 0, 0, 0, std::nullopt,
                  std::nullopt, to_string(res.status)});
    }
    rt.validity->set_check_margin(scenario->safety.d_min);
    if (!res.ok()) {
      log.append({sim_time, rt.spec->name, "plan-failure", 0, 0, 0, std::nullopt,
                  std::nullopt, to_string(res.status)});
      rt.region_active = false;
      return false;
    }
    rt.region_active = used_region;
    log.append({sim_time, rt.spec->name, "plan", 0, 0, 0, std::nullopt,
                std::nullopt, used_region ? "informed" : "uniform"});
    return true;
  }

  void begin_planning(RobotRt& rt) {
    const Pose target = task_target(rt);
    if (plan_to(rt, target, true)) {
      rt.phase = Phase::kPlanning;
      rt.phase_until = sim_time + (rt.region_active ? opt.plan_cost_informed_s
                                                    : opt.plan_cost_default_s);
    } else {
      task_failed(rt);
    }
  }

  void start_task(RobotRt& rt) {
    if (rt.task_idx >= rt.queue.size()) {
      rt.phase = Phase::kDone;
      return;
    }
    const ExecTask& task = rt.queue[rt.task_idx];
    rt.stage = task.kind == ExecTask::Kind::kReach ? Stage::kReach : Stage::kToPick;
    rt.current_object = -1;
    if (task.kind == ExecTask::Kind::kPickPlace) {
      for (std::size_t i = 0; i < objects.size(); ++i) {
        if (objects[i].obj->label == task.object.label &&
            objects[i].obj->instance_id == task.object.instance_id) {
          rt.current_object = static_cast<int>(i);
          break;
        }
      }
      rebuild_env_maps();  // own target leaves this robot's obstacle set
    }
    rt.task_start_time = sim_time;
    rt.task_path_len = 0.0;
    rt.attempts = 0;
    if (opt.record_deviation && !rt.first_task_recorded) {
      rt.first_task_recording = true;
      rt.first_task_trace.clear();
      rt.first_task_trace.push_back(rt.last_ee);
      rt.reference = reference_trajectory(*scenario, rt.index, rt.q, task_target(rt));
    }
    begin_planning(rt);
  }

  void task_failed(RobotRt& rt) {
    ++rt.attempts;
    if (rt.attempts < opt.max_task_attempts) {
      begin_planning(rt);
      return;
    }
    const ExecTask& task = rt.queue[rt.task_idx];
    if (task.kind == ExecTask::Kind::kPickPlace &&
        !rt.requeued_once.count(sched::key_of(task.object))) {
      // One requeue pass: fold the failure back through the scheduler.
      log.append({sim_time, rt.spec->name, "detect", 0, 0, 0, std::nullopt,
                  std::nullopt, "re-detection"});
      sched::TaskSequence seq;
      seq.robot = rt.spec->name;
      for (std::size_t i = rt.task_idx; i < rt.queue.size(); ++i) {
        if (rt.queue[i].kind == ExecTask::Kind::kPickPlace) {
          seq.tasks.push_back(rt.queue[i].object);
        }
      }
      const auto requeued = sched::resequence(
          seq, {}, {sched::key_of(task.object)}, {},
          kin::fk_ee(*rt.spec, rt.q));
      rt.requeued_once.insert(sched::key_of(task.object));
      rt.queue.resize(rt.task_idx);
      for (const auto& t : requeued.tasks) {
        rt.queue.push_back(ExecTask{ExecTask::Kind::kPickPlace, t, Pose()});
      }
      log.append({sim_time, rt.spec->name, "schedule", 0, 0, 0, std::nullopt,
                  std::nullopt, "resequence"});
      rt.current_object = -1;
      start_task(rt);
      return;
    }
    // Terminal failure.
    if (task.kind == ExecTask::Kind::kPickPlace) {
      rt.unfinished.push_back(task.object.label + "#" +
                              std::to_string(task.object.instance_id));
      if (rt.current_object >= 0) rt.current_object = -1;
    } else {
      rt.unfinished.push_back("reach-target");
    }
    ++rt.task_idx;
    start_task(rt);
  }

  void complete_task(RobotRt& rt) {
    if (rt.first_task_recording) {
      rt.first_task_recording = false;
      rt.first_task_recorded = true;
      if (rt.reference) {
        const auto ref_trace = plan::ee_trace(*rt.spec, *rt.reference);
        rt.deviation = deviation_series(rt.first_task_trace, ref_trace);
      }
    }
    makespan = std::max(makespan, sim_time);
    ++rt.task_idx;
    rt.current_object = -1;
    start_task(rt);
  }

  // --- per-tick robot step ---------------------------------------------------

  void step_robot(int r) {
    RobotRt& rt = robots[static_cast<std::size_t>(r)];
    if (rt.phase == Phase::kDone && !rt.scripted) return;

    world::RobotBodies own = bodies_of(r);
    std::optional<world::RobotBodies> other_bodies;
    if (robots.size() > 1) {
      other_bodies = bodies_of(1 - r);
    }
    Margins m = margins_for(r, own, other_bodies ? &*other_bodies : nullptr);

    // Safety accounting on the committed (pre-move) state.
    if (m.d_total < 0.0) ++penetrations;

    // Commanded EE velocity for the steering decision.
    Vec3 v_cmd = Vec3::Zero();
    if (rt.phase == Phase::kMoving) {
      const kin::JointConfig q_next =
          rt.traj.config_at(std::min(rt.traj_time + opt.tick_dt, rt.traj.duration()));
      v_cmd = (kin::fk_ee(*rt.spec, q_next).translation - rt.last_ee) / opt.tick_dt;
    } else if (rt.steer_mode) {
      v_cmd = rt.steer_v;
    } else if (rt.phase == Phase::kScripted && rt.scripted) {
      const double tau = std::fmod(sim_time + opt.tick_dt, rt.scripted_period);
      v_cmd = (kin::fk_ee(*rt.spec, rt.scripted->config_at(tau)).translation -
               rt.last_ee) /
              opt.tick_dt;
    }

    const avoid::TickDecision decision = avoid::avoidance_tick(
        m.d_total, m.contacts, avoid::VelocityCommand{v_cmd}, scenario->safety,
        rt.last_ee);

    bool moved = false;
    switch (decision.action) {
      case avoid::TickAction::kStop: {
        if (rt.phase == Phase::kMoving || rt.phase == Phase::kScripted ||
            rt.steer_mode) {
          if (rt.phase != Phase::kStopped) ++stop_count;
          log.append({sim_time, rt.spec->name, "stop", m.d_env, m.d_mutual,
                      m.d_total, std::nullopt, std::nullopt, ""});
          if (rt.phase != Phase::kScripted) {
            rt.phase = Phase::kStopped;
            rt.steer_mode = false;
            rt.want_replan_after_stop = true;
          }
        } else {
          log.append({sim_time, rt.spec->name, "stop", m.d_env, m.d_mutual,
                      m.d_total, std::nullopt, std::nullopt, "holding"});
        }
        break;
      }
      case avoid::TickAction::kSteerAndReplan: {
        if (rt.phase == Phase::kStopped) {
          // Margin recovered above d_min: replan out of the band.
          if (rt.want_replan_after_stop) {
            rt.want_replan_after_stop = false;
            ++replan_count;
            log.append({sim_time, rt.spec->name, "replan", m.d_env, m.d_mutual,
                        m.d_total, std::nullopt, std::nullopt, "stop-exit"});
            begin_planning(rt);
          }
          break;
        }
        if (rt.phase == Phase::kMoving || rt.steer_mode) {
          if (!rt.steer_mode) {
            ++steer_count;
            rt.steer_mode = true;
            rt.steer_ticks = 0;
            rt.steer_speed =
                std::clamp(v_cmd.norm(), kSteerSpeedMin, kSteerSpeedMax);
            rt.steer_v = v_cmd.norm() > 1e-9 ? v_cmd : Vec3(0, 0, 0.1);
          }
          log.append({sim_time, rt.spec->name, "steer", m.d_env, m.d_mutual,
                      m.d_total, decision.phi, decision.theta, ""});
          moved = apply_steering(rt, m, decision);
        }
        // Stationary phases hold; their replan happens with the next motion.
        break;
      }
      case avoid::TickAction::kContinue: {
        if (rt.steer_mode) {
          // Near-collision cleared: replan from the current configuration.
          rt.steer_mode = false;
          ++replan_count;
          log.append({sim_time, rt.spec->name, "replan", m.d_env, m.d_mutual,
                      m.d_total, std::nullopt, std::nullopt, "steer-exit"});
          begin_planning(rt);
          break;
        }
        if (rt.phase == Phase::kStopped) {
          if (rt.want_replan_after_stop) {
            rt.want_replan_after_stop = false;
            ++replan_count;
            log.append({sim_time, rt.spec->name, "replan", m.d_env, m.d_mutual,
                        m.d_total, std::nullopt, std::nullopt, "stop-exit"});
            begin_planning(rt);
          }
          break;
        }
        moved = advance_phase(rt);
        break;
      }
    }

    // Margin bookkeeping: moving below d_min outside a stop is a violation.
    if (m.d_total < scenario->safety.d_min &&
        decision.action != avoid::TickAction::kStop && moved) {
      ++margin_violations;
    }

    commit(rt);
  }

  bool apply_steering(RobotRt& rt, const Margins& m,
                      const avoid::TickDecision& decision) {
    ++rt.steer_ticks;
    if (rt.steer_ticks > kMaxSteerTicks) {
      rt.phase = Phase::kStopped;
      rt.steer_mode = false;
      rt.want_replan_after_stop = true;
      ++stop_count;
      log.append({sim_time, rt.spec->name, "stop", m.d_env, m.d_mutual,
                  m.d_total, std::nullopt, std::nullopt, "steer-timeout"});
      return false;
    }
    Vec3 v = decision.v_rot.value_or(rt.steer_v);
    if (v.norm() < 1e-9) return false;
    // Speed scales with remaining margin so the band cannot be crossed in a
    // single tick.
    const auto& safety = scenario->safety;
    const double scale = std::clamp(
        (m.d_total - safety.d_min) / (safety.epsilon - safety.d_min), 0.05, 1.0);
    v = v.normalized() * (rt.steer_speed * scale);
    rt.steer_v = v;

    const Eigen::MatrixXd J = kin::jacobian(*rt.spec, rt.q).topRows(3);
    const Eigen::MatrixXd JJt =
        J * J.transpose() + 1e-4 * Eigen::Matrix3d::Identity();
    Eigen::VectorXd dq = J.transpose() * JJt.ldlt().solve(Eigen::Vector3d(v));
    for (int j = 0; j < dq.size(); ++j) {
      const double vmax = rt.spec->velocity_limits[static_cast<std::size_t>(j)];
      dq[j] = std::clamp(dq[j], -vmax, vmax);
    }
    rt.q = kin::clamp_to_limits(*rt.spec, rt.q + dq * opt.tick_dt);
    return true;
  }

  bool advance_phase(RobotRt& rt) {
    switch (rt.phase) {
      case Phase::kIdle:
        start_task(rt);
        return false;
      case Phase::kPlanning:
        if (sim_time + 1e-9 >= rt.phase_until) {
          rt.traj = rt.pending;
          rt.traj_time = 0.0;
          rt.phase = Phase::kMoving;
        }
        return false;
      case Phase::kMoving: {
        rt.traj_time += opt.tick_dt;
        const double dur = rt.traj.duration();
        const bool at_end = rt.traj_time >= dur;
        rt.q = rt.traj.config_at(std::min(rt.traj_time, dur));
        if (at_end) arrive(rt);
        return true;
      }
      case Phase::kGrasping:
        if (sim_time + 1e-9 >= rt.phase_until) finish_grasp(rt);
        return false;
      case Phase::kPlacing:
        if (sim_time + 1e-9 >= rt.phase_until) finish_place(rt);
        return false;
      case Phase::kScripted: {
        const double tau = std::fmod(sim_time + opt.tick_dt, rt.scripted_period);
        rt.q = rt.scripted->config_at(tau);
        return true;
      }
      case Phase::kStopped:
      case Phase::kDone:
        return false;
    }
    return false;
  }

  void arrive(RobotRt& rt) {
    const Pose target = task_target(rt);
    const Vec3 ee = kin::fk_ee(*rt.spec, rt.q).translation;
    if ((ee - target.translation).norm() > kArriveTol) {
      // Steering or an early trajectory end left us short: replan.
      ++replan_count;
      log.append({sim_time, rt.spec->name, "replan", 0, 0, 0, std::nullopt,
                  std::nullopt, "arrival-miss"});
      begin_planning(rt);
      return;
    }
    switch (rt.stage) {
      case Stage::kReach:
        complete_task(rt);
        break;
      case Stage::kToPick:
        rt.phase = Phase::kGrasping;
        rt.phase_until = sim_time + opt.grasp_dwell_s;
        break;
      case Stage::kToPlace:
        rt.phase = Phase::kPlacing;
        rt.phase_until = sim_time + opt.grasp_dwell_s;
        break;
    }
  }

  void finish_grasp(RobotRt& rt) {
    auto& obj = objects[static_cast<std::size_t>(rt.current_object)];
    obj.state = ObjState::kGrasped;
    obj.grasped_by = rt.index;
    const Vec3 ext = scenario->shape_of(obj.obj->label).extents;
    rt.payload_radius = 0.5 * ext.maxCoeff();
    rebuild_env_maps();
    ObjectReport rep;
    rep.label = obj.obj->label;
    rep.instance_id = obj.obj->instance_id;
    rep.robot = rt.spec->name;
    rep.start_time = rt.task_start_time;
    rep.pick_time = sim_time;
    rt.object_reports.push_back(rep);
    log.append({sim_time, rt.spec->name, "pick", 0, 0, 0, std::nullopt,
                std::nullopt, rep.label});
    rt.stage = Stage::kToPlace;
    rt.attempts = 0;
    begin_planning(rt);
  }

  void finish_place(RobotRt& rt) {
    auto& obj = objects[static_cast<std::size_t>(rt.current_object)];
    obj.state = ObjState::kPlaced;
    obj.grasped_by = -1;
    rt.payload_radius.reset();
    rebuild_env_maps();
    auto& rep = rt.object_reports.back();
    rep.place_time = sim_time;
    rep.ee_path_length = rt.task_path_len;
    log.append({sim_time, rt.spec->name, "place", 0, 0, 0, std::nullopt,
                std::nullopt, rep.label});
    complete_task(rt);
  }

  void commit(RobotRt& rt) {
    const Vec3 ee = kin::fk_ee(*rt.spec, rt.q).translation;
    const double step = (ee - rt.last_ee).norm();
    rt.task_path_len += step;
    rt.total_path_len += step;
    rt.last_ee = ee;
    rt.trace.push_back(ee);
    if (rt.first_task_recording) rt.first_task_trace.push_back(ee);
    if (rt.swept) rt.swept->add_config(*rt.spec, rt.q);
  }

  void check_conservation() const {
    // Each object is in exactly one state; grasped ones must have a live
    // carrier with a payload attached.
    for (const auto& o : objects) {
      if (o.state == ObjState::kGrasped) {
        if (o.grasped_by < 0 ||
            !robots[static_cast<std::size_t>(o.grasped_by)].payload_radius) {
          throw std::logic_error("executor: grasped object without carrier");
        }
      } else if (o.grasped_by != -1) {
        throw std::logic_error("executor: stale grasp reference");
      }
    }
  }

  bool all_done() const {
    for (const auto& rt : robots) {
      if (rt.scripted) continue;  // scripted robots never finish a queue
      if (rt.phase != Phase::kDone) return false;
    }
    return true;
  }

  RunReport finalize(bool timed_out) {
    RunReport rep;
    rep.seed = opt.run_seed;
    rep.planner = opt.planner == PlannerKind::kGmmInformed ? "gmm" : "default";
    rep.makespan = makespan;
    rep.replan_count = replan_count;
    rep.stop_count = stop_count;
    rep.steer_count = steer_count;
    rep.margin_violations = margin_violations;
    rep.penetrations = penetrations;
    rep.complete = !timed_out;
    rep.config.epsilon = scenario->safety.epsilon;
    rep.config.d_min = scenario->safety.d_min;
    rep.config.voxel_resolution = scenario->safety.voxel_resolution;
    rep.config.update_rate_hz = scenario->safety.update_rate_hz;
    rep.config.tick_dt = opt.tick_dt;
    rep.config.step_size = opt.step_size;
    rep.config.plan_timeout_s = opt.plan_timeout_s;
    rep.config.shortcut_iterations = opt.shortcut_iterations;
    for (auto& rt : robots) {
      for (const auto& o : rt.object_reports) rep.objects.push_back(o);
      for (const auto& u : rt.unfinished) rep.unfinished.push_back(u);
      if (timed_out && rt.task_idx < rt.queue.size() && !rt.scripted) {
        for (std::size_t i = rt.task_idx; i < rt.queue.size(); ++i) {
          const auto& task = rt.queue[i];
          rep.unfinished.push_back(
              task.kind == ExecTask::Kind::kPickPlace
                  ? task.object.label + "#" + std::to_string(task.object.instance_id)
                  : std::string("reach-target"));
        }
      }
      RobotReport rr;
      rr.name = rt.spec->name;
      rr.ee_path_length = rt.total_path_len;
      if (rt.swept) {
        rr.swept_volume = rt.swept->volume();
        rr.n_occ = rt.swept->n_occ();
      }
      rr.deviation = rt.deviation;
      rep.robots.push_back(std::move(rr));
    }
    if (!rep.unfinished.empty()) rep.complete = false;
    if (robots.size() > 1 && robots[0].swept && robots[1].swept) {
      rep.overlap_volume =
          world::overlap_volume(robots[0].swept->cells(), robots[0].swept->resolution(),
                                robots[1].swept->cells(), robots[1].swept->resolution());
    }
    return rep;
  }

  RunReport run() {
    for (auto& rt : robots) {
      if (rt.scripted) {
        rt.phase = Phase::kScripted;
      } else if (rt.queue.empty()) {
        rt.phase = Phase::kDone;
      }
    }
    if (all_done()) return finalize(false);

    int scene_counter = 0;
    const int ticks_per_scene =
        std::max(1, static_cast<int>(std::llround(scene_dt / opt.tick_dt)));
    bool timed_out = true;
    while (sim_time < opt.sim_timeout_s) {
      if (all_done()) {
        timed_out = false;
        break;
      }
      if (scene_counter++ % ticks_per_scene == 0) rebuild_env_maps();
      for (std::size_t r = 0; r < robots.size(); ++r) {
        step_robot(static_cast<int>(r));
      }
      check_conservation();
      sim_time += opt.tick_dt;
    }
    if (all_done()) timed_out = false;
    return finalize(timed_out);
  }
};

Executor::Executor(const Scenario& scenario, const ExecOptions& options)
    : impl_(std::make_unique<Impl>(scenario, options)) {}

Executor::~Executor() = default;

void Executor::set_tasks(int robot, std::vector<ExecTask> tasks) {
  impl_->robots[static_cast<std::size_t>(robot)].queue = std::move(tasks);
}

void Executor::set_scripted_motion(int robot, const plan::Trajectory& loop) {
  auto& rt = impl_->robots[static_cast<std::size_t>(robot)];
  rt.scripted = loop;
  rt.scripted_period = std::max(loop.duration(), 1e-6);
}

void Executor::set_initial_payload(int robot, double radius) {
  impl_->robots[static_cast<std::size_t>(robot)].payload_radius = radius;
}

void Executor::schedule_from_detections() {
  Impl& im = *impl_;
  im.log.append({im.sim_time, "", "detect", 0, 0, 0, std::nullopt, std::nullopt,
                 std::to_string(im.scenario->objects.size()) + " objects"});
  const auto table = sched::PriorityTable::for_scenario(*im.scenario);
  Rng det_rng = im.rng.fork(0xDE7EC7);
  const auto detections = sched::ingest_detections(
      *im.scenario, table, im.opt.detection_noise, det_rng);
  std::vector<Pose> ee_poses;
  for (const auto& rt : im.robots) {
    ee_poses.push_back(kin::fk_ee(*rt.spec, rt.q));
  }
  const auto sequences =
      sched::build_sequences(detections, im.scenario->robots, table, ee_poses);
  for (std::size_t r = 0; r < im.robots.size(); ++r) {
    std::vector<ExecTask> tasks;
    for (const auto& t : sequences[r].tasks) {
      tasks.push_back(ExecTask{ExecTask::Kind::kPickPlace, t, Pose()});
    }
    im.robots[r].queue = std::move(tasks);
  }
  im.log.append({im.sim_time, "", "schedule", 0, 0, 0, std::nullopt,
                 std::nullopt, "sequences built"});
}

RunReport Executor::run() { return impl_->run(); }

const EventLog& Executor::log() const { return impl_->log; }

const std::vector<Vec3>& Executor::ee_trace(int robot) const {
  return impl_->robots[static_cast<std::size_t>(robot)].trace;
}

RunReport run_disassembly(const Scenario& scenario, const ExecOptions& options,
                          EventLog* log_out) {
  Executor exec(scenario, options);
  exec.schedule_from_detections();
  RunReport rep = exec.run();
  if (log_out != nullptr) *log_out = exec.log();
  return rep;
}

plan::Trajectory reference_trajectory(const Scenario& scenario, int robot,
                                      const kin::JointConfig& start,
                                      const Pose& target) {
  const kin::RobotSpec& spec = scenario.robots[static_cast<std::size_t>(robot)];
  plan::ValidityContext validity(spec, scenario.safety);  // obstacle-free copy
  plan::PlanRequest req;
  req.robot = &spec;
  req.start = start;
  req.goal_pose = target;
  req.validity = &validity;
  req.timeout_s = 2.0;
  req.seed = scenario.seed ^ 0x9e3779b9u ^ static_cast<uint64_t>(robot);
  const plan::PlanResult res = plan::plan_rrt_connect(req);
  if (!res.ok()) return {};
  const plan::Path smooth =
      plan::shortcut(res.path, validity, 500, req.seed + 1, req.step_size);
  return plan::time_parameterize(smooth, spec);
}

std::vector<double> deviation_series(const std::vector<Vec3>& executed,
                                     const std::vector<Vec3>& reference) {
  const auto resample = [](const std::vector<Vec3>& pts) {
    std::vector<double> arc{0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
      arc.push_back(arc.back() + (pts[i] - pts[i - 1]).norm());
    }
    const double total = arc.back();
    std::vector<Vec3> out;
    for (int k = 0; k < 100; ++k) {
      const double s = total * k / 99.0;
      const auto it = std::lower_bound(arc.begin(), arc.end(), s);
      const std::size_t hi = std::min<std::size_t>(
          static_cast<std::size_t>(it - arc.begin()), pts.size() - 1);
      if (hi == 0 || total <= 0.0) {
        out.push_back(pts.front());
        continue;
      }
      const std::size_t lo = hi - 1;
      const double seg = arc[hi] - arc[lo];
      const double u = seg > 0.0 ? (s - arc[lo]) / seg : 0.0;
      out.push_back(pts[lo] + u * (pts[hi] - pts[lo]));
    }
    return out;
  };
  if (executed.empty() || reference.empty()) return {};
  const auto e = resample(executed);
  const auto r = resample(reference);
  std::vector<double> dev(100);
  for (int k = 0; k < 100; ++k) dev[static_cast<std::size_t>(k)] = (e[static_cast<std::size_t>(k)] - r[static_cast<std::size_t>(k)]).norm();
  return dev;
}

}  // namespace tamp::exec
