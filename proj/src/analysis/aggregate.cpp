#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "bbkit/analysis.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

std::map<std::string, std::vector<double>> reference_points(const std::vector<RunRecord>& records) {
  std::map<std::string, std::vector<double>> worst;
  for (const auto& r : records) {
    if (r.n_objectives < 2) continue;
    for (const auto& t : r.history.entries) {
      if (!t.value.ok()) continue;
      const auto& y = t.value.objectives;
      if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) continue;
      auto [it, fresh] = worst.try_emplace(r.task_id, y);
      if (!fresh)
        for (std::size_t j = 0; j < y.size(); ++j) it->second[j] = std::max(it->second[j], y[j]);
    }
  }
  for (auto& [id, w] : worst)
    for (double& v : w) v = v == 0.0 ? 0.1 : v + 0.1 * std::abs(v);
  return worst;
}

double run_performance(const RunRecord& record, std::size_t step, std::span<const double> ref) {
  const TrajectoryEntry* e = record.trajectory.at_step(step);
  if (record.n_objectives == 1) {
    if (!e) return std::numeric_limits<double>::infinity();
    return record.history.entries.at(e->incumbents.front()).value.objectives.front();
  }
  if (!e || e->incumbents.empty()) return 0.0;
  if (ref.size() != record.n_objectives)
    throw SpecError("multi-objective performance of " + record.task_id + " needs a reference point");
  std::vector<std::vector<double>> front;
  for (std::size_t i : e->incumbents) front.push_back(record.history.entries.at(i).value.objectives);
  return -hypervolume(front, ref).value;
}

double final_performance(const RunRecord& record, std::span<const double> ref) {
  return run_performance(record, std::max(record.history.size(), record.n_trials), ref);
}

std::size_t step_at_fraction(std::size_t n_trials, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw SpecError("budget fraction must lie in (0, 1]");
  const double raw = std::ceil(t * static_cast<double>(n_trials) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1,
                                 std::max<std::size_t>(n_trials, 1));
}

PerformanceMatrix PerformanceMatrix::select(std::span<const std::string> task_ids) const {
  PerformanceMatrix out;
  out.optimizers = optimizers;
  for (const auto& id : task_ids) {
    const auto it = std::find(tasks.begin(), tasks.end(), id);
    if (it == tasks.end()) throw SpecError("task '" + id + "' is not in the matrix");
    out.tasks.push_back(id);
    out.values.push_back(values[static_cast<std::size_t>(it - tasks.begin())]);
  }
  return out;
}

PerformanceMatrix aggregate(const std::vector<RunRecord>& records, const AggregateOptions& options) {
  std::map<std::string, std::vector<double>> own_refs;
  const auto* refs = options.references;
  if (!refs) {
    own_refs = reference_points(records);
    refs = &own_refs;
  }

  std::set<std::string> tasks, optimizers;
  std::set<std::uint64_t> seeds;
  std::map<std::tuple<std::string, std::string, std::uint64_t>, double> cells;
  for (const auto& r : records) {
    tasks.insert(r.task_id);
    optimizers.insert(r.optimizer_id);
    seeds.insert(r.seed);
    std::span<const double> ref;
    if (const auto it = refs->find(r.task_id); it != refs->end()) ref = it->second;
    const std::size_t step = options.fraction ? step_at_fraction(r.n_trials, *options.fraction)
                                              : std::max(r.history.size(), r.n_trials);
    if (!cells.emplace(std::tuple{r.task_id, r.optimizer_id, r.seed}, run_performance(r, step, ref))
             .second)
      throw SpecError("duplicate run for " + r.task_id + " / " + r.optimizer_id + " / seed " +
                      std::to_string(r.seed));
  }
  if (optimizers.size() < 2) throw SpecError("a performance matrix needs at least two optimizers");

  std::vector<std::string> missing;
  PerformanceMatrix m;
  m.tasks.assign(tasks.begin(), tasks.end());
  m.optimizers.assign(optimizers.begin(), optimizers.end());
  for (const auto& task : m.tasks) {
    std::vector<double> row;
    for (const auto& opt : m.optimizers) {
      double sum = 0.0;
      for (std::uint64_t seed : seeds) {
        const auto it = cells.find({task, opt, seed});
        if (it == cells.end()) {
          missing.push_back(task + " / " + opt + " / seed " + std::to_string(seed));
          continue;
        }
        sum += it->second;
      }
      row.push_back(sum / static_cast<double>(seeds.size()));
    }
    m.values.push_back(std::move(row));
  }
  if (!missing.empty()) {
    std::string msg = "incomplete run grid, " + std::to_string(missing.size()) + " missing cell(s):";
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += "\n  " + missing[i];
    if (missing.size() > 10) msg += "\n  ...";
    throw CompletenessError(msg);
  }
  return m;
}

std::vector<double> default_fraction_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(i / 20.0);
  return g;
}

std::vector<double> RankOverTime::non_significant() const {
  std::vector<double> out;
  for (const auto& p : points)
    if (!p.friedman.significant) out.push_back(p.fraction);
  return out;
}

RankOverTime rank_over_time(const std::vector<RunRecord>& records, std::span<const double> fractions,
                            double alpha) {
  if (fractions.empty()) throw SpecError("rank_over_time needs at least one budget fraction");
  const auto refs = reference_points(records);
  RankOverTime out;
  for (double t : fractions) {
    AggregateOptions opts;
    opts.fraction = t;
    opts.references = &refs;
    const PerformanceMatrix m = aggregate(records, opts);
    if (out.optimizers.empty()) out.optimizers = m.optimizers;
    out.points.push_back({t, mean_ranks(m), friedman_test(m, alpha)});
  }
  return out;
}

}  // namespace bbkit
