#pragma once

#include <map>
#include <ostream>

#include "tamp/exec/case_studies.hpp"

namespace tamp::exec {

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

Stat stat_of(const std::vector<double>& xs);

struct PlannerAggregate {
  std::string name;
  std::vector<double> makespans;
  std::vector<double> path_lengths;  // cumulative EE per run
  std::vector<double> swept_r1, swept_r2, overlaps;
  int margin_violations = 0;
  int penetrations = 0;
  int incomplete = 0;
  // Per-object rows keyed by (robot, label#id): times and lengths per trial.
  std::map<std::string, std::vector<double>> object_times;
  std::map<std::string, std::vector<double>> object_lengths;
};

struct CompareResult {
  PlannerAggregate a, b;
  std::vector<double> paired_path_diff;      // b - a per (seed, trial)
  std::vector<double> paired_makespan_diff;  // b - a
  int trials_per_seed = 0;
  int seeds = 0;
};

struct BenchmarkOptions {
  int seeds = 20;
  int trials = 5;
  ExecOptions exec;  // planner field is overridden per side
  PlannerKind planner_a = PlannerKind::kDefault;
  PlannerKind planner_b = PlannerKind::kGmmInformed;
};

// Paired benchmark over the seeded scenario family: each (seed, trial) pair
// runs both planners on the identical randomized scene with the same run
// seed.
CompareResult compare_planners(const Scenario& base, const ModelSet& models,
                               const BenchmarkOptions& opt);

// Table-II-shaped CSV: one row per object and summary rows for the totals.
void write_compare_csv(const CompareResult& r, std::ostream& os);

std::string compare_to_json(const CompareResult& r);

}  // namespace tamp::exec
