#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tamp/core/pose.hpp"
#include "tamp/core/scenario.hpp"

namespace tamp::exec {

struct ObjectReport {
  std::string label;
  int instance_id = 0;
  std::string robot;
  double start_time = 0.0;  // task start (s, simulated)
  double pick_time = 0.0;   // grasp completed
  double place_time = 0.0;  // object released
  double ee_path_length = 0.0;
};

struct RobotReport {
  std::string name;
  double ee_path_length = 0.0;
  double swept_volume = 0.0;
  std::size_t n_occ = 0;
  std::vector<double> deviation;  // vs reference, 100 arc-length samples
};

// Echoed configuration so every artifact records the knobs that produced it.
struct ConfigEcho {
  double epsilon = 0.15;
  double d_min = 0.01;
  double voxel_resolution = 0.03;
  double update_rate_hz = 10.0;
  double tick_dt = 0.05;
  double step_size = 0.1;
  double plan_timeout_s = 2.0;
  int shortcut_iterations = 100;
  int gmm_k = 5;
};

struct RunReport {
  int version = 1;
  uint64_t seed = 0;
  std::string planner;  // "default" | "gmm"
  std::vector<ObjectReport> objects;
  std::vector<RobotReport> robots;
  double makespan = 0.0;
  double overlap_volume = 0.0;
  int replan_count = 0;
  int stop_count = 0;
  int steer_count = 0;
  int margin_violations = 0;  // ticks below d_min not covered by a stop
  int penetrations = 0;       // ticks with d_total < 0
  bool complete = true;
  std::vector<std::string> unfinished;
  ConfigEcho config;
};

std::string report_to_json(const RunReport& r);

// Per-tick monitoring record (JSON lines on export).
struct Event {
  double t = 0.0;
  std::string robot;
  std::string type;  // detect | schedule | plan | replan | steer | stop | ...
  double d_env = 0.0;
  double d_mutual = 0.0;
  double d_total = 0.0;
  std::optional<double> phi;
  std::optional<double> theta;
  std::string detail;
};

class EventLog {
public:
  void append(Event e) { events_.push_back(std::move(e)); }
  const std::vector<Event>& events() const { return events_; }
  void write_jsonl(std::ostream& os) const;
  std::size_t count_type(const std::string& type) const;

private:
  std::vector<Event> events_;
};

}  // namespace tamp::exec
