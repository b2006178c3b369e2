#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tamp/core/rng.hpp"
#include "tamp/core/scenario.hpp"
#include "tamp/sched/tool_type.hpp"

namespace tamp::sched {

class UnknownComponent : public std::runtime_error {
public:
  explicit UnknownComponent(const std::string& label)
      : std::runtime_error("unknown component label: " + label) {}
};

class UnassignableTask : public std::runtime_error {
public:
  explicit UnassignableTask(const std::string& what) : std::runtime_error(what) {}
};

struct TaskObject {
  std::string label;
  int instance_id = 0;
  Pose pose;
  ToolType required_tool = ToolType::kThreeFingerGripper;
  int priority = 0;
};

// (label, instance_id) identifies a task across re-sequencing.
using TaskKey = std::pair<std::string, int>;
inline TaskKey key_of(const TaskObject& o) { return {o.label, o.instance_id}; }

// Disassembly precedence and tool requirements per component class.
class PriorityTable {
public:
  static PriorityTable defaults();
  static PriorityTable from_rows(const std::vector<PriorityRow>& rows);
  // Scenario override when present, built-in defaults otherwise.
  static PriorityTable for_scenario(const Scenario& s);

  const PriorityRow& row_for(const std::string& label) const;  // UnknownComponent
  const std::vector<PriorityRow>& rows() const { return rows_; }

private:
  std::vector<PriorityRow> rows_;
};

struct TaskSequence {
  std::string robot;
  std::vector<TaskObject> tasks;
};

struct DetectionNoise {
  double sigma_pos = 0.005;  // m, per axis
  double miss_probability = 0.0;
};

// Synthetic detection stub: one TaskObject per ground-truth instance with
// Gaussian position noise and optional per-object misses.
std::vector<TaskObject> ingest_detections(const Scenario& scenario,
                                          const PriorityTable& table,
                                          const DetectionNoise& noise, Rng& rng);

// Stable sort by priority score, then instance id. UnknownComponent for
// labels missing from the table.
std::vector<TaskObject> priority_sort(std::vector<TaskObject> objects,
                                      const PriorityTable& table);

// Routes each object to the first robot carrying its tool, order preserved.
// UnassignableTask when no robot can take an object.
std::vector<std::vector<TaskObject>> tool_partition(
    const std::vector<TaskObject>& ordered,
    const std::vector<kin::RobotSpec>& robots);

// Greedy nearest-neighbor chaining within each priority group, starting from
// the robot's end-effector position and walking to each chosen object.
TaskSequence cost_order(const std::vector<TaskObject>& partition,
                        const std::string& robot, const Pose& ee_pose);

// Drops completed tasks, re-orders the remainder (with any new detections)
// from the current end-effector pose and requeues failed tasks at the back of
// their priority group.
TaskSequence resequence(const TaskSequence& seq,
                        const std::set<TaskKey>& completed,
                        const std::set<TaskKey>& failed,
                        const std::vector<TaskObject>& new_detections,
                        const Pose& ee_pose);

// Full pipeline: sort, partition, cost-order. Sequences come back aligned
// with the robots vector.
std::vector<TaskSequence> build_sequences(const std::vector<TaskObject>& objects,
                                          const std::vector<kin::RobotSpec>& robots,
                                          const PriorityTable& table,
                                          const std::vector<Pose>& ee_poses);

}  // namespace tamp::sched
