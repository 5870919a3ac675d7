#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>

#include "bbkit/analysis.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
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

Json friedman_json(const RankReport& r) {
  return {{"n_tasks", r.n_tasks},
          {"n_optimizers", r.optimizers.size()},
          {"applicable", r.friedman.applicable},
          {"statistic", real_to_json(r.friedman.statistic)},
          {"p_value", real_to_json(r.friedman.p_value)},
          {"significant", r.friedman.significant},
          {"table_row", format_rank_row(r)}};
}

Json cd_json(const RankReport& r) {
  Json pairs = Json::array();
  for (std::size_t i = 0; i < r.optimizers.size(); ++i)
    for (std::size_t j = i + 1; j < r.optimizers.size(); ++j)
      if (r.separated[i][j]) pairs.push_back({r.optimizers[i], r.optimizers[j]});
  Json ranks = Json::array();
  for (double m : r.mean_ranks) ranks.push_back(real_to_json(m));
  return {{"k", r.optimizers.size()},
          {"n", r.n_tasks},
          {"alpha", r.alpha},
          {"q", nemenyi_q(r.optimizers.size(), r.alpha)},
          {"cd", r.cd},
          {"optimizers", r.optimizers},
          {"mean_ranks", ranks},
          {"separated_pairs", pairs}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> write_analysis_reports(const AnalysisInputs& inputs,
                                                          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw IoError("cannot create output directory " + out_dir.string());

  std::map<TaskType, std::vector<RunRecord>> by_type;
  for (const auto& r : inputs.records) by_type[r.task_type].push_back(r);

  std::string ranks_csv = "task_type,set,optimizer,mean_rank,position\n";
  std::string rot_csv = "task_type,fraction,optimizer,mean_rank,friedman_p,significant\n";
  std::string heat_csv = "task_type,task_id,optimizer,raw,normalized\n";
  std::string val_csv =
      "task_type,optimizer,dev_mean_rank,dev_position,dev_cell,test_mean_rank,test_position,"
      "test_cell,dev_significant,test_significant,consistent,within_cd_swaps\n";
  Json friedman = {{"format_version", 1}, {"alpha", inputs.alpha}, {"task_types", Json::object()}};
  Json cd = {{"format_version", 1}, {"alpha", inputs.alpha}, {"task_types", Json::object()}};

  for (const auto& [type, records] : by_type) {
    const std::string tname(to_string(type));
    std::set<std::string> opts;
    for (const auto& r : records) opts.insert(r.optimizer_id);
    if (opts.size() < 2) continue;

    const auto refs = reference_points(records);
    AggregateOptions agg;
    agg.references = &refs;
    const PerformanceMatrix matrix = aggregate(records, agg);

    std::vector<std::string> dev, test;
    if (const auto it = inputs.subsets.find(type); it != inputs.subsets.end()) {
      dev = it->second.first;
      test = it->second.second;
    } else {
      for (std::size_t i = 0; i < matrix.tasks.size(); ++i)
        (i % 2 == 0 ? dev : test).push_back(matrix.tasks[i]);
    }

    std::vector<std::pair<std::string, RankReport>> reports;
    reports.emplace_back("all", rank_report(matrix, inputs.alpha));
    if (!dev.empty() && !test.empty()) {
      reports.emplace_back("dev", rank_report(matrix.select(dev), inputs.alpha));
      reports.emplace_back("test", rank_report(matrix.select(test), inputs.alpha));
    }
    for (const auto& [set, rep] : reports) {
      const auto pos = rank_positions(rep.mean_ranks);
      for (std::size_t j = 0; j < rep.optimizers.size(); ++j)
        ranks_csv += tname + "," + set + "," + csv_field(rep.optimizers[j]) + "," +
                     num(rep.mean_ranks[j]) + "," + std::to_string(pos[j]) + "\n";
      friedman["task_types"][tname][set] = friedman_json(rep);
      cd["task_types"][tname][set] = cd_json(rep);
    }

    const RankOverTime rot = rank_over_time(records, inputs.fractions, inputs.alpha);
    for (const auto& p : rot.points)
      for (std::size_t j = 0; j < rot.optimizers.size(); ++j)
        rot_csv += tname + "," + num(p.fraction) + "," + csv_field(rot.optimizers[j]) + "," +
                   num(p.mean_ranks[j]) + "," + num(p.friedman.p_value) + "," +
                   (p.friedman.significant ? "true" : "false") + "\n";

    const HeatmapMatrix heat = normalize_costs_for_heatmap(matrix);
    for (std::size_t i = 0; i < matrix.tasks.size(); ++i)
      for (std::size_t j = 0; j < matrix.optimizers.size(); ++j)
        heat_csv += tname + "," + csv_field(matrix.tasks[i]) + "," + csv_field(matrix.optimizers[j]) +
                    "," + num(matrix.values[i][j]) + "," + num(heat.normalized[i][j]) + "\n";

    if (reports.size() == 3) {
      const RankingValidation v = ranking_validation(reports[1].second, reports[2].second);
      for (const auto& row : v.rows) {
        std::string swaps;
        for (const auto& [a, b] : v.within_cd_swaps)
          if (a == row.optimizer || b == row.optimizer)
            swaps += (swaps.empty() ? "" : ";") + (a == row.optimizer ? b : a);
        val_csv += tname + "," + csv_field(row.optimizer) + "," + num(row.dev_rank) + "," +
                   std::to_string(row.dev_position) + "," +
                   format_rank_cell(row.dev_rank, row.dev_position) + "," + num(row.test_rank) + "," +
                   std::to_string(row.test_position) + "," +
                   format_rank_cell(row.test_rank, row.test_position) + "," +
                   (v.dev_significant ? "true" : "false") + "," +
                   (v.test_significant ? "true" : "false") + "," +
                   (v.consistent ? "true" : "false") + "," + csv_field(swaps) + "\n";
      }
    }
  }

  const std::vector<std::pair<std::string, std::string>> files = {
      {"ranks.csv", ranks_csv},
      {"friedman.json", friedman.dump(2) + "\n"},
      {"cd.json", cd.dump(2) + "\n"},
      {"rank_over_time.csv", rot_csv},
      {"heatmap.csv", heat_csv},
      {"ranking_validation.csv", val_csv}};
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    write_text(out_dir / name, text);
    written.push_back(out_dir / name);
  }
  return written;
}

std::map<TaskType, std::pair<std::vector<std::string>, std::vector<std::string>>>
read_subsets_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<TaskType, std::pair<std::vector<std::string>, std::vector<std::string>>> out;
  try {
    const Json j = Json::parse(in);
    for (const auto& r : j.at("results"))
      out[parse_task_type(r.at("task_type").get<std::string>())] = {
          r.at("dev").get<std::vector<std::string>>(), r.at("test").get<std::vector<std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace bbkit
