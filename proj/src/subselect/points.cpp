#include <algorithm>
#include <cmath>

#include "bbkit/errors.hpp"
#include "bbkit/subselect.hpp"

namespace bbkit {

std::vector<PerformancePoint> build_points(const PerformanceMatrix& matrix) {
  std::vector<PerformancePoint> out;
  out.reserve(matrix.n_tasks());
  for (std::size_t i = 0; i < matrix.n_tasks(); ++i) {
    const auto& row = matrix.values[i];
    PerformancePoint p{matrix.tasks[i], min_max_scale(row), false};
    p.degenerate = std::all_of(row.begin(), row.end(), [&](double v) { return v == row.front(); });
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PerformancePoint> build_points(const std::vector<RunRecord>& records) {
  return build_points(aggregate(records));
}

std::string_view to_string(Transform t) { return t == Transform::Log ? "log" : "identity"; }

Transform parse_transform(std::string_view text) {
  if (text == "identity") return Transform::Identity;
  if (text == "log") return Transform::Log;
  throw SpecError("unknown transform '" + std::string(text) + "'");
}

std::vector<PerformancePoint> transform_log(std::vector<PerformancePoint> points) {
  if (points.empty()) return points;
  const std::size_t d = points.front().y.size();
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> column;
    for (const auto& p : points) {
      if (p.y.size() != d) throw SpecError("performance points differ in dimension");
      if (!(p.y[j] >= 0.0)) throw DomainError("log transform needs non-negative components");
      column.push_back(std::log10(p.y[j] + kLogEpsilon));
    }
    const auto scaled = min_max_scale(column);
    for (std::size_t i = 0; i < points.size(); ++i) points[i].y[j] = scaled[i];
  }
  return points;
}

std::vector<PerformancePoint> apply_transform(std::vector<PerformancePoint> points, Transform t) {
  return t == Transform::Log ? transform_log(std::move(points)) : points;
}

PointSet to_point_set(const std::vector<PerformancePoint>& points) {
  std::vector<std::vector<double>> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back(p.y);
  return PointSet(rows);
}

Json to_json(const SubsetResult& r) {
  return {{"task_type", to_string(r.task_type)},
          {"k", r.k},
          {"transform", to_string(r.transform)},
          {"dev", r.dev},
          {"test", r.test},
          {"d_dev", r.d_dev},
          {"d_test", r.d_test},
          {"restarts", r.restarts},
          {"brute", r.brute},
          {"degraded", r.degraded},
          {"relaxed_filters", r.relaxed},
          {"degenerate_tasks", r.degenerate_tasks}};
}

SubsetResult subset_result_from_json(const Json& j) {
  SubsetResult r;
  try {
    r.task_type = parse_task_type(j.at("task_type").get<std::string>());
    r.k = j.at("k").get<std::size_t>();
    r.transform = parse_transform(j.at("transform").get<std::string>());
    r.dev = j.at("dev").get<std::vector<std::string>>();
    r.test = j.at("test").get<std::vector<std::string>>();
    r.d_dev = j.at("d_dev").get<double>();
    r.d_test = j.at("d_test").get<double>();
    r.restarts = j.value("restarts", std::size_t{0});
    r.brute = j.value("brute", true);
    r.degraded = j.value("degraded", false);
    r.relaxed = j.value("relaxed_filters", std::vector<std::string>{});
    r.degenerate_tasks = j.value("degenerate_tasks", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("subset result: ") + e.what());
  }
  return r;
}

}  // namespace bbkit
