#include "bbkit/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "bbkit/analysis.hpp"
#include "bbkit/errors.hpp"
#include "bbkit/runner.hpp"
#include "bbkit/subselect.hpp"
#include "bbkit/tasks.hpp"

namespace bbkit {

namespace {

/// Failure caused by the command-line input rather than by the computation.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path.string());
}

void require_dir(const std::filesystem::path& dir, const char* what) {
  if (!std::filesystem::is_directory(dir))
    throw InputError(std::string(what) + " is not a directory: " + dir.string());
}

void create_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

// ---------------------------------------------------------------------------
// Task tables

struct TaskRow {
  std::string id, type, family;
  std::size_t dimensions = 0, n_trials = 0;
  std::array<std::size_t, 4> counts{};  // float, int, categorical, ordinal
  bool have_counts = false;
};

std::string family_of(const std::string& task_id) {
  const auto a = task_id.find('/');
  if (a == std::string::npos) return task_id;
  const auto b = task_id.find('/', a + 1);
  return task_id.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
}

TaskRow row_from_json(const Json& t) {
  TaskRow row;
  row.id = t.at("id").get<std::string>();
  row.type = t.at("task_type").get<std::string>();
  row.family = family_of(row.id);
  row.n_trials = t.at("n_trials").get<std::size_t>();
  for (const auto& p : t.at("config_space").at("params")) {
    ++row.dimensions;
    switch (parse_param_kind(p.at("kind").get<std::string>())) {
      case ParamKind::Float: ++row.counts[0]; break;
      case ParamKind::Int: ++row.counts[1]; break;
      case ParamKind::Categorical: ++row.counts[2]; break;
      case ParamKind::Ordinal: ++row.counts[3]; break;
    }
  }
  row.have_counts = true;
  return row;
}

const char* kTaskHeader =
    "task_id,task_type,task,dimensions,n_trials,n_floats,n_integers,n_categoricals,n_ordinals\n";

std::string task_line(const TaskRow& r) {
  std::string s = csv_field(r.id) + "," + r.type + "," + csv_field(r.family) + "," +
                  std::to_string(r.dimensions) + "," + std::to_string(r.n_trials);
  for (std::size_t c : r.counts) s += "," + (r.have_counts ? std::to_string(c) : std::string());
  return s + "\n";
}

// ---------------------------------------------------------------------------
// Commands

int cmd_tasks(const std::string& spec_path, std::ostream& out) {
  const Json j = read_json_file(spec_path);
  const TaskSet tasks = make_task_set(task_set_spec_from_json(j));
  out << kTaskHeader;
  for (const auto& t : tasks) out << task_line(row_from_json(task_to_json(t)));
  return kExitOk;
}

struct RunArgs {
  std::string plan;
  std::string out_dir;
  std::size_t workers = 0;
};

int cmd_run(const RunArgs& a, std::uint64_t seed, std::ostream& out) {
  const std::filesystem::path plan_path = a.plan;
  ExperimentPlan plan =
      experiment_plan_from_json(read_json_file(plan_path), plan_path.parent_path());
  if (!a.out_dir.empty()) plan.out_dir = a.out_dir;
  if (plan.out_dir.empty()) throw InputError("no output directory: pass --out or set out_dir in the plan");
  plan.master_seed = seed;
  const std::size_t workers =
      a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
  const BatchResult r = run_batch(plan, workers);
  out << "runs " << r.records.size() << ", executed " << r.executed << ", skipped " << r.skipped
      << ", evaluations " << r.evaluations << "\n";
  return kExitOk;
}

struct SubselectArgs {
  std::string records;
  std::string out_dir;
  std::string k = "auto";
  std::string transform = "auto";
  std::string measure = "lebesgue";
  std::size_t restarts = 100;
  std::size_t window = 10;
  bool no_brute = false;
  std::size_t workers = 0;
};

int cmd_subselect(const SubselectArgs& a, std::uint64_t seed, std::ostream& out) {
  require_dir(a.records, "--records");
  std::optional<std::size_t> fixed_k;
  if (a.k != "auto") {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(a.k.c_str(), &end, 10);
    if (a.k.empty() || *end != '\0' || v == 0) throw InputError("--k must be 'auto' or a positive integer");
    fixed_k = static_cast<std::size_t>(v);
  }
  std::vector<Transform> transforms;
  if (a.transform == "auto")
    transforms = {Transform::Identity, Transform::Log};
  else
    transforms = {parse_transform(a.transform)};
  SwapOptions options;
  options.brute = !a.no_brute;
  options.window = a.window;
  if (a.measure == "empirical")
    options.measure = Measure::Empirical;
  else if (a.measure != "lebesgue")
    throw InputError("--measure must be 'lebesgue' or 'empirical'");
  const std::size_t workers =
      a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());

  const auto records = load_records(a.records);
  std::map<std::string, TaskRow> task_rows;
  if (const auto manifest = std::filesystem::path(a.records) / "tasks.json";
      std::filesystem::exists(manifest))
    for (const auto& t : read_json_file(manifest).at("tasks")) {
      TaskRow row = row_from_json(t);
      task_rows.emplace(row.id, std::move(row));
    }

  std::map<TaskType, std::vector<RunRecord>> by_type;
  for (const auto& r : records) by_type[r.task_type].push_back(r);

  Json results = Json::array();
  std::string dev_csv = std::string("task_type,") + kTaskHeader;
  std::string test_csv = dev_csv;
  for (const auto& [type, recs] : by_type) {
    const std::string tname(to_string(type));
    const PerformanceMatrix matrix = aggregate(recs);
    const auto points = build_points(matrix);
    const std::size_t n = points.size();
    const auto ks = fixed_k ? std::vector<std::size_t>{*fixed_k} : auto_k_candidates(n);
    if (ks.empty()) {
      out << tname << ": " << n << " task(s), too few for a dev/test split; skipped\n";
      continue;
    }
    if (fixed_k && 2 * *fixed_k > n)
      throw InputError(tname + ": --k " + a.k + " needs at least " + std::to_string(2 * *fixed_k) +
                       " tasks, found " + std::to_string(n));

    std::vector<DecisionCandidate> candidates;
    std::vector<KSweepRow> sweep_rows;
    out << tname << " k-sweep (" << n << " tasks, " << matrix.n_optimizers() << " optimizers)\n";
    out << "transform,k,d_dev,d_test,sum\n";
    for (Transform t : transforms) {
      const PointSet ps = to_point_set(apply_transform(points, t));
      const KSweep sweep = k_sweep(ps, ks, a.restarts,
                                   derive_seed(seed, hash_id(tname + "/" + std::string(to_string(t)))),
                                   options, workers);
      for (const auto& row : sweep.rows) {
        out << to_string(t) << "," << row.k << "," << fmt(row.selection.d_dev, "%.6f") << ","
            << fmt(row.selection.d_test, "%.6f") << "," << fmt(row.sum(), "%.6f") << "\n";
        std::vector<std::string> dev_ids, test_ids;
        for (std::size_t i : row.selection.dev) dev_ids.push_back(matrix.tasks[i]);
        for (std::size_t i : row.selection.test) test_ids.push_back(matrix.tasks[i]);
        candidates.push_back({row.k, t, row.selection.d_dev, row.selection.d_test,
                              rank_report(matrix.select(dev_ids)),
                              rank_report(matrix.select(test_ids))});
        sweep_rows.push_back(row);
      }
    }
    const Decision d = config_decision_rule(candidates);
    const auto& c = candidates[d.index];
    SubsetResult res;
    res.task_type = type;
    res.k = c.k;
    res.transform = c.transform;
    res.d_dev = c.d_dev;
    res.d_test = c.d_test;
    res.restarts = a.restarts;
    res.brute = options.brute;
    res.degraded = d.degraded;
    res.relaxed = d.relaxed;
    for (std::size_t i : sweep_rows[d.index].selection.dev) res.dev.push_back(matrix.tasks[i]);
    for (std::size_t i : sweep_rows[d.index].selection.test) res.test.push_back(matrix.tasks[i]);
    for (const auto& p : points)
      if (p.degenerate) res.degenerate_tasks.push_back(p.task_id);
    out << tname << " chosen: k=" << res.k << ", transform=" << to_string(res.transform)
        << ", sum=" << fmt(res.d_dev + res.d_test, "%.6f")
        << (res.degraded ? " (degraded)" : "") << "\n";
    results.push_back(to_json(res));

    const auto emit = [&](const std::vector<std::string>& ids, std::string& csv) {
      for (const auto& id : ids) {
        TaskRow row;
        if (const auto it = task_rows.find(id); it != task_rows.end()) {
          row = it->second;
        } else {
          row.id = id;
          row.type = tname;
          row.family = family_of(id);
          for (const auto& r : recs)
            if (r.task_id == id) {
              row.n_trials = r.n_trials;
              if (!r.history.entries.empty())
                row.dimensions = r.history.entries.front().info.config.values.size();
              break;
            }
        }
        csv += tname + "," + task_line(row);
      }
    };
    emit(res.dev, dev_csv);
    emit(res.test, test_csv);
  }

  const std::filesystem::path dir = a.out_dir;
  create_out_dir(dir);
  const Json doc = {{"format_version", 1}, {"seed", seed}, {"results", results}};
  write_file(dir / "subset.json", doc.dump(2) + "\n");
  write_file(dir / "dev_tasks.csv", dev_csv);
  write_file(dir / "test_tasks.csv", test_csv);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string records;
  std::string out_dir;
  std::string subsets;
  double alpha = 0.05;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  require_dir(a.records, "--records");
  AnalysisInputs in;
  in.records = load_records(a.records);
  in.alpha = a.alpha;
  if (!a.subsets.empty()) {
    if (!std::filesystem::exists(a.subsets)) throw InputError("cannot open " + a.subsets);
    in.subsets = read_subsets_file(a.subsets);
  }
  for (const auto& p : write_analysis_reports(in, a.out_dir)) out << p.string() << "\n";
  return kExitOk;
}

PointSet read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
      continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t')) ++end;
      if (end == cell.c_str() || *end != '\0')
        throw ParseError("not a number: '" + cell + "'", line_no);
      if (!(v >= 0.0 && v <= 1.0))
        throw DomainError("line " + std::to_string(line_no) + ": coordinate " + cell +
                          " outside [0,1]");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("expected " + std::to_string(rows.front().size()) + " columns", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path.string() + " contains no points");
  return PointSet(rows);
}

int cmd_discrepancy(const std::string& points_path, std::ostream& out) {
  const PointSet p = read_points_csv(points_path);
  const DiscrepancyResult r = star_discrepancy_exact(p);
  out << "discrepancy " << fmt(r.value) << "\n";
  out << "side " << (r.box.side == BoxSide::OpenDeficit ? "open_deficit" : "closed_excess") << "\n";
  out << "corner";
  for (double q : r.box.q) out << " " << fmt(q);
  out << "\ndefining_points";
  for (const auto& dp : r.box.defining_points) out << " " << (dp ? std::to_string(*dp) : "-");
  out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Error reporting

struct Classified {
  const char* type;
  int code;
};

Classified classify(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return {"InputError", kExitUsage};
  if (dynamic_cast<const ParseError*>(&e)) return {"ParseError", kExitUsage};
  if (dynamic_cast<const SpecError*>(&e)) return {"SpecError", kExitUsage};
  if (dynamic_cast<const DomainError*>(&e)) return {"DomainError", kExitUsage};
  if (dynamic_cast<const CompletenessError*>(&e)) return {"CompletenessError", kExitUsage};
  if (dynamic_cast<const CapacityError*>(&e)) return {"CapacityError", kExitRuntime};
  if (dynamic_cast<const IoError*>(&e)) return {"IoError", kExitRuntime};
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return {"ParseError", kExitUsage};
  return {"RuntimeError", kExitRuntime};
}

void report(std::ostream& err, bool json, const char* type, const std::string& message, int code) {
  if (json)
    err << Json{{"error", {{"type", type}, {"message", message}, {"exit_code", code}}}}.dump() << "\n";
  else
    err << "bbkit: " << message << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark runs, representative task subsets and rank statistics", "bbkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  bool json_errors = false;
  app.add_option("--seed", seed, "Master seed; every random stream is derived from it");
  app.add_flag("--json-errors", json_errors, "Report failures as one JSON object on stderr");

  std::string spec_path;
  auto* tasks = app.add_subcommand("tasks", "Expand a task-set spec into a task table");
  tasks->add_option("spec", spec_path, "Task-set JSON file")->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run every (task, optimizer, seed) triple of a plan");
  run->add_option("--plan", run_args.plan, "Experiment plan JSON")->required();
  run->add_option("--out", run_args.out_dir, "Record directory (overrides the plan)");
  run->add_option("--workers", run_args.workers, "Worker threads (default: hardware threads)");

  SubselectArgs sub_args;
  auto* sub = app.add_subcommand("subselect", "Select dev/test task subsets of low discrepancy");
  sub->add_option("--records", sub_args.records, "Record directory")->required();
  sub->add_option("--out", sub_args.out_dir, "Output directory")->required();
  sub->add_option("--k", sub_args.k, "Subset size or 'auto'");
  sub->add_option("--transform", sub_args.transform, "auto, log or identity");
  sub->add_option("--measure", sub_args.measure, "lebesgue or empirical");
  sub->add_option("--restarts", sub_args.restarts, "Swap-search restarts")->check(CLI::PositiveNumber);
  sub->add_option("--window", sub_args.window, "Neighbours per side in the worst-box dimension")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--no-brute", sub_args.no_brute, "Skip the final exhaustive swap check");
  sub->add_flag_callback("--brute", [] {}, "Run the exhaustive swap check (default)");
  sub->add_option("--workers", sub_args.workers, "Worker threads (default: hardware threads)");

  AnalyzeArgs an_args;
  auto* an = app.add_subcommand("analyze", "Rank statistics and plot-ready reports");
  an->add_option("--records", an_args.records, "Record directory")->required();
  an->add_option("--out", an_args.out_dir, "Output directory")->required();
  an->add_option("--subsets", an_args.subsets, "subset.json from the subselect command");
  an->add_option("--alpha", an_args.alpha, "Significance level (0.05 or 0.10)");

  std::string points_path;
  auto* disc = app.add_subcommand("discrepancy", "Exact star discrepancy of a point CSV");
  disc->add_option("--points", points_path, "CSV, one point per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    if (json_errors) {
      report(err, true, "UsageError", e.what(), kExitUsage);
      return kExitUsage;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*tasks) return cmd_tasks(spec_path, out);
    if (*run) return cmd_run(run_args, seed, out);
    if (*sub) return cmd_subselect(sub_args, seed, out);
    if (*an) return cmd_analyze(an_args, out);
    if (*disc) return cmd_discrepancy(points_path, out);
  } catch (const std::exception& e) {
    const Classified c = classify(e);
    report(err, json_errors, c.type, e.what(), c.code);
    return c.code;
  }
  return kExitUsage;
}

}  // namespace bbkit
