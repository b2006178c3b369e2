#include "tamp/sched/scheduler.hpp"

#include <algorithm>
#include <map>

namespace tamp::sched {

PriorityTable PriorityTable::defaults() {
  PriorityTable t;
  t.rows_ = {
      {1, "screws", ToolType::kThreeFingerGripper},
      {2, "battery module", ToolType::kVacuumGripper},
      {3, "service plug", ToolType::kThreeFingerGripper},
      {4, "busbar", ToolType::kThreeFingerGripper},
      {5, "cable", ToolType::kThreeFingerGripper},
  };
  return t;
}

PriorityTable PriorityTable::from_rows(const std::vector<PriorityRow>& rows) {
  PriorityTable t;
  t.rows_ = rows;
  std::sort(t.rows_.begin(), t.rows_.end(),
            [](const PriorityRow& a, const PriorityRow& b) {
              return a.priority < b.priority;
            });
  return t;
}

PriorityTable PriorityTable::for_scenario(const Scenario& s) {
  return s.priority_table.empty() ? defaults() : from_rows(s.priority_table);
}

const PriorityRow& PriorityTable::row_for(const std::string& label) const {
  for (const auto& r : rows_) {
    if (r.label == label) return r;
  }
  throw UnknownComponent(label);
}

std::vector<TaskObject> ingest_detections(const Scenario& scenario,
                                          const PriorityTable& table,
                                          const DetectionNoise& noise,
                                          Rng& rng) {
  std::vector<TaskObject> out;
  for (const auto& obj : scenario.objects) {
    // Draw sequence is fixed per object so a miss consumes the same stream.
    const double miss_draw = rng.uniform();
    Vec3 jitter(rng.normal(0.0, noise.sigma_pos),
                rng.normal(0.0, noise.sigma_pos),
                rng.normal(0.0, noise.sigma_pos));
    if (noise.miss_probability > 0.0 && miss_draw < noise.miss_probability) {
      continue;
    }
    const PriorityRow& row = table.row_for(obj.label);
    TaskObject t;
    t.label = obj.label;
    t.instance_id = obj.instance_id;
    t.pose = Pose(obj.pose.rotation, obj.pose.translation + jitter);
    t.required_tool = row.tool;
    t.priority = row.priority;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TaskObject> priority_sort(std::vector<TaskObject> objects,
                                      const PriorityTable& table) {
  for (auto& o : objects) {
    const PriorityRow& row = table.row_for(o.label);
    o.priority = row.priority;
    o.required_tool = row.tool;
  }
  std::stable_sort(objects.begin(), objects.end(),
                   [](const TaskObject& a, const TaskObject& b) {
                     if (a.priority != b.priority) return a.priority < b.priority;
                     if (a.instance_id != b.instance_id) {
                       return a.instance_id < b.instance_id;
                     }
                     return a.label < b.label;
                   });
  return objects;
}

std::vector<std::vector<TaskObject>> tool_partition(
    const std::vector<TaskObject>& ordered,
    const std::vector<kin::RobotSpec>& robots) {
  std::vector<std::vector<TaskObject>> parts(robots.size());
  for (const auto& o : ordered) {
    bool assigned = false;
    for (std::size_t r = 0; r < robots.size(); ++r) {
      if (robots[r].tool == o.required_tool) {
        parts[r].push_back(o);
        assigned = true;
        break;
      }
    }
    if (!assigned) {
      throw UnassignableTask("no robot carries " + to_string(o.required_tool) +
                             " required by " + o.label + "#" +
                             std::to_string(o.instance_id));
    }
  }
  return parts;
}

TaskSequence cost_order(const std::vector<TaskObject>& partition,
                        const std::string& robot, const Pose& ee_pose) {
  TaskSequence seq;
  seq.robot = robot;

  // Group by priority (input is priority-sorted or close to it; group map
  // keeps ascending order regardless).
  std::map<int, std::vector<TaskObject>> groups;
  for (const auto& o : partition) groups[o.priority].push_back(o);

  Vec3 ref = ee_pose.translation;
  for (auto& [priority, group] : groups) {
    std::vector<bool> used(group.size(), false);
    for (std::size_t step = 0; step < group.size(); ++step) {
      int best = -1;
      double best_d = 0.0;
      for (std::size_t i = 0; i < group.size(); ++i) {
        if (used[i]) continue;
        const double d = (group[i].pose.translation - ref).norm();
        if (best < 0 || d < best_d ||
            (d == best_d &&
             group[i].instance_id < group[static_cast<std::size_t>(best)].instance_id)) {
          best = static_cast<int>(i);
          best_d = d;
        }
      }
      used[static_cast<std::size_t>(best)] = true;
      ref = group[static_cast<std::size_t>(best)].pose.translation;
      seq.tasks.push_back(group[static_cast<std::size_t>(best)]);
    }
  }
  return seq;
}

TaskSequence resequence(const TaskSequence& seq,
                        const std::set<TaskKey>& completed,
                        const std::set<TaskKey>& failed,
                        const std::vector<TaskObject>& new_detections,
                        const Pose& ee_pose) {
  std::vector<TaskObject> remaining;
  std::vector<TaskObject> requeued;
  for (const auto& t : seq.tasks) {
    const TaskKey k = key_of(t);
    if (completed.count(k)) continue;
    if (failed.count(k)) {
      requeued.push_back(t);
      continue;
    }
    remaining.push_back(t);
  }
  for (const auto& t : new_detections) remaining.push_back(t);

  TaskSequence out = cost_order(remaining, seq.robot, ee_pose);

  // Failed tasks go to the back of their priority group, ordered by instance.
  std::sort(requeued.begin(), requeued.end(),
            [](const TaskObject& a, const TaskObject& b) {
              if (a.priority != b.priority) return a.priority < b.priority;
              return a.instance_id < b.instance_id;
            });
  for (const auto& t : requeued) {
    auto it = out.tasks.begin();
    while (it != out.tasks.end() && it->priority <= t.priority) ++it;
    out.tasks.insert(it, t);
  }
  return out;
}

std::vector<TaskSequence> build_sequences(const std::vector<TaskObject>& objects,
                                          const std::vector<kin::RobotSpec>& robots,
                                          const PriorityTable& table,
                                          const std::vector<Pose>& ee_poses) {
  const std::vector<TaskObject> ordered = priority_sort(objects, table);
  const auto parts = tool_partition(ordered, robots);
  std::vector<TaskSequence> out;
  for (std::size_t r = 0; r < robots.size(); ++r) {
    out.push_back(cost_order(parts[r], robots[r].name, ee_poses[r]));
  }
  return out;
}

}  // namespace tamp::sched
