#include "tamp/exec/compare.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace tamp::exec {

using nlohmann::json;

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

namespace {

void ingest(PlannerAggregate& agg, const RunReport& rep) {
  agg.makespans.push_back(rep.makespan);
  double total_len = 0.0;
  for (const auto& r : rep.robots) total_len += r.ee_path_length;
  agg.path_lengths.push_back(total_len);
  if (rep.robots.size() > 0) agg.swept_r1.push_back(rep.robots[0].swept_volume);
  if (rep.robots.size() > 1) agg.swept_r2.push_back(rep.robots[1].swept_volume);
  agg.overlaps.push_back(rep.overlap_volume);
  agg.margin_violations += rep.margin_violations;
  agg.penetrations += rep.penetrations;
  if (!rep.complete) ++agg.incomplete;
  for (const auto& o : rep.objects) {
    const std::string key =
        o.robot + "|" + o.label + "#" + std::to_string(o.instance_id);
    agg.object_times[key].push_back(o.place_time - o.start_time);
    agg.object_lengths[key].push_back(o.ee_path_length);
  }
}

RunReport run_one(const Scenario& scenario, const ModelSet& models,
                  const ExecOptions& base, PlannerKind kind, uint64_t run_seed) {
  ExecOptions opt = base;
  opt.planner = kind;
  opt.models = kind == PlannerKind::kGmmInformed ? &models : nullptr;
  opt.run_seed = run_seed;
  return run_disassembly(scenario, opt);
}

}  // namespace

CompareResult compare_planners(const Scenario& base, const ModelSet& models,
                               const BenchmarkOptions& opt) {
  CompareResult out;
  out.seeds = opt.seeds;
  out.trials_per_seed = opt.trials;
  out.a.name = opt.planner_a == PlannerKind::kGmmInformed ? "gmm" : "default";
  out.b.name = opt.planner_b == PlannerKind::kGmmInformed ? "gmm" : "default";

  for (int s = 0; s < opt.seeds; ++s) {
    const Scenario scenario =
        randomize_scenario(base, base.seed + 1000ULL * (s + 1));
    for (int t = 0; t < opt.trials; ++t) {
      const uint64_t run_seed =
          0x9E3779B97F4A7C15ULL * (static_cast<uint64_t>(s) * 131 + t + 1);
      const RunReport ra = run_one(scenario, models, opt.exec, opt.planner_a, run_seed);
      const RunReport rb = run_one(scenario, models, opt.exec, opt.planner_b, run_seed);
      ingest(out.a, ra);
      ingest(out.b, rb);
      out.paired_path_diff.push_back(out.b.path_lengths.back() -
                                     out.a.path_lengths.back());
      out.paired_makespan_diff.push_back(out.b.makespans.back() -
                                         out.a.makespans.back());
    }
  }
  return out;
}

void write_compare_csv(const CompareResult& r, std::ostream& os) {
  os << "row,robot,object,"
     << r.a.name << "_time_mean_s," << r.a.name << "_time_std_s,"
     << r.a.name << "_length_mean_m," << r.a.name << "_length_std_m,"
     << r.b.name << "_time_mean_s," << r.b.name << "_time_std_s,"
     << r.b.name << "_length_mean_m," << r.b.name << "_length_std_m\n";
  std::set<std::string> keys;
  for (const auto& [k, _] : r.a.object_times) keys.insert(k);
  for (const auto& [k, _] : r.b.object_times) keys.insert(k);
  for (const auto& key : keys) {
    const auto split = key.find('|');
    const std::string robot = key.substr(0, split);
    const std::string object = key.substr(split + 1);
    const auto pull = [&](const PlannerAggregate& agg) {
      const auto ti = agg.object_times.find(key);
      const auto li = agg.object_lengths.find(key);
      const Stat ts = ti == agg.object_times.end() ? Stat{} : stat_of(ti->second);
      const Stat ls = li == agg.object_lengths.end() ? Stat{} : stat_of(li->second);
      return std::make_pair(ts, ls);
    };
    const auto [ta, la] = pull(r.a);
    const auto [tb, lb] = pull(r.b);
    os << "object," << robot << ',' << object << ',' << ta.mean << ','
       << ta.stddev << ',' << la.mean << ',' << la.stddev << ',' << tb.mean
       << ',' << tb.stddev << ',' << lb.mean << ',' << lb.stddev << '\n';
  }
  const Stat ma = stat_of(r.a.makespans), mb = stat_of(r.b.makespans);
  const Stat pa = stat_of(r.a.path_lengths), pb = stat_of(r.b.path_lengths);
  os << "summary,all,disassembly_time," << ma.mean << ',' << ma.stddev
     << ",,," << mb.mean << ',' << mb.stddev << ",,\n";
  os << "summary,all,path_length,,," << pa.mean << ',' << pa.stddev << ",,,"
     << pb.mean << ',' << pb.stddev << '\n';
}

std::string compare_to_json(const CompareResult& r) {
  const auto agg_json = [](const PlannerAggregate& a) {
    const Stat m = stat_of(a.makespans), p = stat_of(a.path_lengths);
    const Stat s1 = stat_of(a.swept_r1), s2 = stat_of(a.swept_r2);
    const Stat ov = stat_of(a.overlaps);
    return json{{"planner", a.name},
                {"makespan_s", {{"mean", m.mean}, {"std", m.stddev}}},
                {"path_length_m", {{"mean", p.mean}, {"std", p.stddev}}},
                {"swept_r1_m3", {{"mean", s1.mean}, {"std", s1.stddev}}},
                {"swept_r2_m3", {{"mean", s2.mean}, {"std", s2.stddev}}},
                {"overlap_m3", {{"mean", ov.mean}, {"std", ov.stddev}}},
                {"margin_violations", a.margin_violations},
                {"penetrations", a.penetrations},
                {"incomplete_runs", a.incomplete}};
  };
  json j;
  j["version"] = 1;
  j["seeds"] = r.seeds;
  j["trials_per_seed"] = r.trials_per_seed;
  j["planner_a"] = agg_json(r.a);
  j["planner_b"] = agg_json(r.b);
  j["paired_path_diff_m"] = r.paired_path_diff;
  j["paired_makespan_diff_s"] = r.paired_makespan_diff;
  return j.dump(2);
}

}  // namespace tamp::exec
