#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "bbkit/errors.hpp"
#include "bbkit/runner.hpp"

namespace bbkit {

namespace {
constexpr int kFormatVersion = 1;
}

void write_run_record(const RunRecord& r, std::ostream& out) {
  Json header = {{"format_version", kFormatVersion},
                 {"kind", "header"},
                 {"task_id", r.task_id},
                 {"optimizer_id", r.optimizer_id},
                 {"seed", r.seed},
                 {"task_type", to_string(r.task_type)},
                 {"n_objectives", r.n_objectives},
                 {"n_trials", r.n_trials},
                 {"n_entries", r.history.size()},
                 {"status", r.status == RunStatus::Complete ? "complete" : "partial"},
                 {"wall_time", real_to_json(r.wall_time)}};
  if (r.max_budget) header["max_budget"] = real_to_json(*r.max_budget);
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    const Trial& t = r.history.entries[i];
    Json line = {{"kind", "trial"},
                 {"index", i},
                 {"info", to_json(t.info)},
                 {"value", to_json(t.value)}};
    out << line.dump() << '\n';
  }
}

RunRecord read_run_record(std::istream& in) {
  RunRecord r;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed record line: ") + e.what(), line_no);
    }
    try {
      if (!have_header) {
        if (j.value("kind", std::string()) != "header")
          throw ParseError("first line must be the header", line_no);
        if (j.value("format_version", 0) != kFormatVersion)
          throw ParseError("unsupported format_version", line_no);
        r.task_id = j.at("task_id").get<std::string>();
        r.optimizer_id = j.at("optimizer_id").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.task_type = parse_task_type(j.at("task_type").get<std::string>());
        r.n_objectives = j.at("n_objectives").get<std::size_t>();
        r.n_trials = j.at("n_trials").get<std::size_t>();
        expected = j.at("n_entries").get<std::size_t>();
        const std::string status = j.at("status").get<std::string>();
        if (status != "complete" && status != "partial")
          throw ParseError("unknown run status '" + status + "'", line_no);
        r.status = status == "complete" ? RunStatus::Complete : RunStatus::Partial;
        r.wall_time = real_from_json(j.at("wall_time"));
        if (j.contains("max_budget")) r.max_budget = real_from_json(j["max_budget"]);
        have_header = true;
        continue;
      }
      if (j.value("kind", std::string()) != "trial")
        throw ParseError("expected a trial line", line_no);
      if (j.at("index").get<std::size_t>() != r.history.size())
        throw ParseError("trial index out of sequence", line_no);
      Trial t{trial_info_from_json(j.at("info")), trial_value_from_json(j.at("value"))};
      if (t.value.objectives.size() != r.n_objectives)
        throw ParseError("objective count does not match header", line_no);
      r.history.entries.push_back(std::move(t));
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(e.what(), line_no);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("missing header line", line_no + 1);
  if (r.history.size() != expected)
    throw ParseError("truncated record: header announces " + std::to_string(expected) +
                         " trials, found " + std::to_string(r.history.size()),
                     line_no + 1);
  if (r.status == RunStatus::Complete && r.history.size() != r.n_trials)
    throw ParseError("complete record must hold n_trials trials", line_no + 1);
  r.trajectory = update_incumbent(r.history, r.policy());
  return r;
}

void write_run_record_file(const RunRecord& record, const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  // Write-then-rename so an interrupted run never leaves a half record behind.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    write_run_record(record, out);
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

RunRecord read_run_record_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_run_record(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::filesystem::path record_path(const std::filesystem::path& dir, const std::string& task_id,
                                  const std::string& optimizer_id, std::uint64_t seed) {
  return dir / task_id / optimizer_id / (std::to_string(seed) + ".runrec");
}

std::vector<RunRecord> load_records(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".runrec")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(read_run_record_file(f));
  return out;
}

}  // namespace bbkit
