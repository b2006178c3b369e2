#include "tamp/exec/report.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace tamp::exec {

using nlohmann::json;

namespace {

// Event-log distances can be +inf (empty world); keep the JSON valid.
double finite_or_cap(double v) {
  return std::isfinite(v) ? v : (v > 0 ? 1e9 : -1e9);
}

}  // namespace

std::string report_to_json(const RunReport& r) {
  json j;
  j["version"] = r.version;
  j["seed"] = r.seed;
  j["planner"] = r.planner;
  j["makespan_s"] = r.makespan;
  j["overlap_volume_m3"] = r.overlap_volume;
  j["replan_count"] = r.replan_count;
  j["stop_count"] = r.stop_count;
  j["steer_count"] = r.steer_count;
  j["margin_violations"] = r.margin_violations;
  j["penetrations"] = r.penetrations;
  j["complete"] = r.complete;
  j["unfinished"] = r.unfinished;
  j["objects"] = json::array();
  for (const auto& o : r.objects) {
    j["objects"].push_back({{"label", o.label},
                            {"instance_id", o.instance_id},
                            {"robot", o.robot},
                            {"start_time_s", o.start_time},
                            {"pick_time_s", o.pick_time},
                            {"place_time_s", o.place_time},
                            {"path_length_m", o.ee_path_length}});
  }
  j["robots"] = json::array();
  for (const auto& rr : r.robots) {
    json jr{{"name", rr.name},
            {"path_length_m", rr.ee_path_length},
            {"swept_volume_m3", rr.swept_volume},
            {"n_occ", rr.n_occ}};
    if (!rr.deviation.empty()) jr["deviation_m"] = rr.deviation;
    j["robots"].push_back(jr);
  }
  j["config"] = {{"epsilon", r.config.epsilon},
                 {"d_min", r.config.d_min},
                 {"voxel_resolution", r.config.voxel_resolution},
                 {"update_rate_hz", r.config.update_rate_hz},
                 {"tick_dt", r.config.tick_dt},
                 {"step_size", r.config.step_size},
                 {"plan_timeout_s", r.config.plan_timeout_s},
                 {"shortcut_iterations", r.config.shortcut_iterations},
                 {"gmm_k", r.config.gmm_k}};
  return j.dump(2);
}

void EventLog::write_jsonl(std::ostream& os) const {
  for (const auto& e : events_) {
    json j{{"t", e.t},
           {"robot", e.robot},
           {"type", e.type},
           {"d_env", finite_or_cap(e.d_env)},
           {"d_mutual", finite_or_cap(e.d_mutual)},
           {"d_total", finite_or_cap(e.d_total)}};
    if (e.phi) j["phi"] = *e.phi;
    if (e.theta) j["theta"] = *e.theta;
    if (!e.detail.empty()) j["detail"] = e.detail;
    os << j.dump() << '\n';
  }
}

std::size_t EventLog::count_type(const std::string& type) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(),
                    [&](const Event& e) { return e.type == type; }));
}

}  // namespace tamp::exec
