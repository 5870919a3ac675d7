#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "bbkit/errors.hpp"
#include "bbkit/optimizers.hpp"
#include "bbkit/runner.hpp"

namespace bbkit {

namespace {

TrialValue failed_value(std::size_t n_objectives) {
  TrialValue v;
  v.objectives.assign(n_objectives, std::numeric_limits<double>::quiet_NaN());
  v.status = TrialStatus::Failed;
  return v;
}

}  // namespace

RunRecord run_one(const Task& task, const OptimizerSpec& spec, std::uint64_t seed,
                  std::uint64_t master_seed) {
  RunRecord r;
  r.task_id = task.id;
  r.optimizer_id = spec.id;
  r.seed = seed;
  r.task_type = task.task_type;
  r.n_objectives = task.n_objectives;
  if (task.fidelity) r.max_budget = task.fidelity->max_budget;
  r.n_trials = task.n_trials;

  const std::uint64_t run_seed =
      derive_seed(derive_seed(master_seed, seed), hash_id(task.id) ^ (hash_id(spec.id) << 1));
  auto optimizer = make_optimizer(spec.id, spec.params, task, run_seed);

  for (std::size_t i = 0; i < task.n_trials; ++i) {
    TrialInfo info;
    try {
      info = optimizer->ask();
    } catch (const Error&) {
      r.status = RunStatus::Partial;
      break;
    }
    TrialValue value;
    try {
      value = task.objective->evaluate(info);
      if (value.objectives.size() != task.n_objectives) value = failed_value(task.n_objectives);
    } catch (const std::exception&) {
      value = failed_value(task.n_objectives);
    }
    r.history.entries.push_back({info, value});
    if (std::isfinite(value.cost)) r.wall_time += value.cost;
    try {
      optimizer->tell(info, value);
    } catch (const ProtocolError&) {
      r.status = RunStatus::Partial;
      break;
    }
  }
  r.trajectory = update_incumbent(r.history, task);
  return r;
}

ExperimentPlan experiment_plan_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("experiment plan must be a JSON object");
  ExperimentPlan plan;
  try {
    const Json& ts = j.at("task_set");
    if (ts.is_string()) {
      std::filesystem::path p = ts.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream in(p);
      if (!in) throw IoError("cannot open task set " + p.string());
      Json spec;
      try {
        spec = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(p.string() + ": " + e.what());
      }
      plan.tasks = make_task_set(task_set_spec_from_json(spec));
    } else {
      plan.tasks = make_task_set(task_set_spec_from_json(ts));
    }
    for (const auto& o : j.at("optimizers")) {
      OptimizerSpec spec;
      if (o.is_string()) {
        spec.id = o.get<std::string>();
      } else {
        spec.id = o.at("id").get<std::string>();
        spec.params = o.value("params", Json::object());
      }
      optimizer_supports(spec.id, TaskType::BB);  // rejects unknown ids
      plan.optimizers.push_back(std::move(spec));
    }
    if (j.contains("seeds")) {
      plan.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    } else {
      const auto n = j.value("n_seeds", std::size_t{20});
      for (std::size_t i = 0; i < n; ++i) plan.seeds.push_back(i);
    }
    if (j.contains("out_dir")) plan.out_dir = j["out_dir"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment plan: ") + e.what());
  }
  if (std::set<std::uint64_t>(plan.seeds.begin(), plan.seeds.end()).size() != plan.seeds.size())
    throw SpecError("experiment plan seeds must be distinct");
  return plan;
}

BatchResult run_batch(const ExperimentPlan& plan, std::size_t workers) {
  if (std::set<std::uint64_t>(plan.seeds.begin(), plan.seeds.end()).size() != plan.seeds.size())
    throw SpecError("experiment plan seeds must be distinct");
  {
    std::error_code ec;
    std::filesystem::create_directories(plan.out_dir, ec);
    if (ec || !std::filesystem::is_directory(plan.out_dir))
      throw IoError("cannot create output directory " + plan.out_dir.string());
    const auto probe = plan.out_dir / ".write_probe";
    std::ofstream out(probe);
    if (!out || !(out << "ok") || !out.flush())
      throw IoError("output directory is not writable: " + plan.out_dir.string());
    out.close();
    std::filesystem::remove(probe, ec);
  }
  {
    Json manifest = {{"format_version", 1}, {"tasks", Json::array()}};
    for (const auto& t : plan.tasks) manifest["tasks"].push_back(task_to_json(t));
    const auto path = plan.out_dir / "tasks.json";
    const auto tmp = plan.out_dir / "tasks.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out || !(out << manifest.dump(2) << '\n') || !out.flush())
        throw IoError("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
  }

  struct Job {
    const Task* task;
    const OptimizerSpec* optimizer;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& task : plan.tasks)
    for (const auto& opt : plan.optimizers)
      if (optimizer_supports(opt.id, task.task_type))
        for (std::uint64_t seed : plan.seeds) jobs.push_back({&task, &opt, seed});

  BatchResult result;
  result.records.resize(jobs.size());
  std::vector<char> executed(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      {
        std::lock_guard lock(error_mutex);
        if (error) return;
      }
      try {
        const Job& job = jobs[i];
        const auto path = record_path(plan.out_dir, job.task->id, job.optimizer->id, job.seed);
        if (std::filesystem::exists(path)) {
          try {
            result.records[i] = read_run_record_file(path);
            continue;
          } catch (const ParseError&) {
            // Unreadable leftovers are recomputed.
          }
        }
        result.records[i] = run_one(*job.task, *job.optimizer, job.seed, plan.master_seed);
        write_run_record_file(result.records[i], path);
        executed[i] = 1;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (executed[i]) {
      ++result.executed;
      result.evaluations += result.records[i].history.size();
    } else {
      ++result.skipped;
    }
  }
  return result;
}

}  // namespace bbkit
