#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bbkit/core.hpp"
#include "bbkit/serialize.hpp"
#include "bbkit/tasks.hpp"

namespace bbkit {

enum class RunStatus { Complete, Partial };

struct RunRecord {
  std::string task_id;
  std::string optimizer_id;
  std::uint64_t seed = 0;
  TaskType task_type = TaskType::BB;
  std::size_t n_objectives = 1;
  std::optional<double> max_budget;
  std::size_t n_trials = 0;
  History history;
  Trajectory trajectory;
  double wall_time = 0.0;  // sum of trial costs
  RunStatus status = RunStatus::Complete;

  IncumbentPolicy policy() const { return {n_objectives, max_budget}; }
  bool operator==(const RunRecord&) const = default;
};

struct OptimizerSpec {
  std::string id;
  Json params = Json::object();
};

/// Exactly task.n_trials ask -> evaluate -> tell cycles. A throwing objective
/// yields a failed trial; an optimizer protocol error ends the run as Partial.
RunRecord run_one(const Task& task, const OptimizerSpec& optimizer, std::uint64_t seed,
                  std::uint64_t master_seed = 0);

/// Line-delimited JSON: one header line, then one line per trial.
void write_run_record(const RunRecord& record, std::ostream& out);
/// Throws ParseError naming the offending line; a record with fewer trial lines
/// than its header announces is rejected as truncated.
RunRecord read_run_record(std::istream& in);

void write_run_record_file(const RunRecord& record, const std::filesystem::path& path);
RunRecord read_run_record_file(const std::filesystem::path& path);

/// `<dir>/<task_id>/<optimizer_id>/<seed>.runrec`
std::filesystem::path record_path(const std::filesystem::path& dir, const std::string& task_id,
                                  const std::string& optimizer_id, std::uint64_t seed);

/// Every *.runrec below `dir`, ordered by path.
std::vector<RunRecord> load_records(const std::filesystem::path& dir);

struct ExperimentPlan {
  TaskSet tasks;
  std::vector<OptimizerSpec> optimizers;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir;
  std::uint64_t master_seed = 0;
};

/// Reads the plan file. `task_set` may be inline or a path (relative to the plan file).
ExperimentPlan experiment_plan_from_json(const Json& j, const std::filesystem::path& base_dir = {});

struct BatchResult {
  std::vector<RunRecord> records;  // triple order: task, optimizer, seed
  std::size_t executed = 0;
  std::size_t skipped = 0;
  std::size_t evaluations = 0;  // objective evaluations performed by this call
};

/// Runs every (task, optimizer, seed) triple whose optimizer supports the task
/// type, on `workers` threads, one run per job. Records already on disk are
/// reused. Also writes `<out_dir>/tasks.json`, the declarative form of every
/// task. Throws IoError before any run when the output directory is unusable.
BatchResult run_batch(const ExperimentPlan& plan, std::size_t workers);

}  // namespace bbkit
