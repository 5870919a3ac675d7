#pragma once

// Seed aggregation, rank statistics (Friedman, Nemenyi), rank-over-time curves,
// dev/test ranking validation and hypervolume scoring for multi-objective runs.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbkit/runner.hpp"

namespace bbkit {

// ---------------------------------------------------------------------------
// Hypervolume

struct HypervolumeResult {
  double value = 0.0;
  bool clipped = false;  // some point lay beyond the reference and was clipped to it
};

/// Measure of the union of boxes [p, ref] (minimization). Two or three objectives.
/// Dominated and duplicate points are allowed and contribute nothing extra.
HypervolumeResult hypervolume(std::span<const std::vector<double>> front, std::span<const double> ref);

/// Per-task reference points: componentwise worst objective over every ok trial
/// of the task in `records`, pushed out by 10% of its magnitude (by 0.1 when it is 0).
std::map<std::string, std::vector<double>> reference_points(const std::vector<RunRecord>& records);

/// Performance of the incumbent after `step` trials (lower is better).
/// Single objective: incumbent cost, +inf when there is no incumbent yet.
/// Multi-objective: minus the hypervolume of the incumbent front w.r.t. `ref`.
double run_performance(const RunRecord& record, std::size_t step,
                       std::span<const double> ref = {});
double final_performance(const RunRecord& record, std::span<const double> ref = {});

// ---------------------------------------------------------------------------
// Performance matrices

struct PerformanceMatrix {
  std::vector<std::string> tasks;
  std::vector<std::string> optimizers;
  std::vector<std::vector<double>> values;  // [task][optimizer], mean over seeds

  std::size_t n_tasks() const { return tasks.size(); }
  std::size_t n_optimizers() const { return optimizers.size(); }
  /// Rows for the listed tasks, in the listed order. Throws SpecError for unknown ids.
  PerformanceMatrix select(std::span<const std::string> task_ids) const;
};

struct AggregateOptions {
  /// Evaluate incumbents at this fraction of each run's n_trials instead of the end.
  std::optional<double> fraction;
  /// Fixed reference points; computed from the records when absent.
  const std::map<std::string, std::vector<double>>* references = nullptr;
};

/// Mean over seeds of each (task, optimizer) cell. Tasks and optimizers are
/// sorted by id. Throws CompletenessError naming missing (task, optimizer, seed)
/// cells, SpecError for fewer than two optimizers.
PerformanceMatrix aggregate(const std::vector<RunRecord>& records, const AggregateOptions& options = {});

/// Step at which a run is evaluated for budget fraction t in (0, 1].
std::size_t step_at_fraction(std::size_t n_trials, double t);

// ---------------------------------------------------------------------------
// Ranks and tests

/// Ascending ranks of one row, ties receiving the average of their positions.
std::vector<double> average_ranks(std::span<const double> row);
std::vector<std::vector<double>> rank_rows(const PerformanceMatrix& matrix);
std::vector<double> mean_ranks(const PerformanceMatrix& matrix);

struct FriedmanResult {
  bool applicable = false;  // needs K >= 3 and N >= 2
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

/// Tie-corrected Friedman statistic, p-value from chi-squared with K-1 degrees of freedom.
FriedmanResult friedman_test(const PerformanceMatrix& matrix, double alpha = 0.05);

/// Studentized range quantile divided by sqrt 2 for K in [2, 20], alpha in {0.05, 0.10}.
double nemenyi_q(std::size_t k, double alpha = 0.05);
double nemenyi_cd(std::size_t k, std::size_t n, double alpha = 0.05);

struct RankReport {
  std::vector<std::string> optimizers;
  std::vector<double> mean_ranks;
  FriedmanResult friedman;
  double alpha = 0.05;
  double cd = 0.0;
  std::size_t n_tasks = 0;
  /// separated[i][j]: |mean rank i - mean rank j| > cd
  std::vector<std::vector<bool>> separated;
};

RankReport rank_report(const PerformanceMatrix& matrix, double alpha = 0.05);

/// 1-based ordinal positions of mean ranks; tied values share the highest position of their group.
std::vector<int> rank_positions(std::span<const double> mean_ranks);

// ---------------------------------------------------------------------------
// Rank over time

struct RankCurvePoint {
  double fraction = 0.0;
  std::vector<double> mean_ranks;
  FriedmanResult friedman;
};

struct RankOverTime {
  std::vector<std::string> optimizers;
  std::vector<RankCurvePoint> points;
  /// Fractions at which the omnibus test is not significant (the grey band).
  std::vector<double> non_significant() const;
};

/// Throws SpecError for an empty grid or fractions outside (0, 1].
RankOverTime rank_over_time(const std::vector<RunRecord>& records, std::span<const double> fractions,
                            double alpha = 0.05);
std::vector<double> default_fraction_grid();  // 0.05, 0.10, ..., 1.00

// ---------------------------------------------------------------------------
// Dev/test validation

struct ValidationRow {
  std::string optimizer;
  double dev_rank = 0.0;
  int dev_position = 0;
  double test_rank = 0.0;
  int test_position = 0;
};

struct RankingValidation {
  std::vector<ValidationRow> rows;
  bool dev_significant = false;
  bool test_significant = false;
  double dev_cd = 0.0;
  double test_cd = 0.0;
  bool consistent = false;  // identical rank order on dev and test
  /// Pairs ordered differently on dev and test whose gap is below the CD on both sets.
  std::vector<std::pair<std::string, std::string>> within_cd_swaps;
};

/// Throws SpecError when the reports cover different optimizers.
RankingValidation ranking_validation(const RankReport& dev, const RankReport& test);

/// "2.70 (3)"
std::string format_rank_cell(double mean_rank, int position);
/// "1.65 (2) & 1.65 (2) & 2.70 (3) & yes"
std::string format_rank_row(const RankReport& report);

// ---------------------------------------------------------------------------
// Heatmap

struct HeatmapMatrix {
  PerformanceMatrix raw;
  std::vector<std::vector<double>> normalized;  // per-task min-max, constant rows -> 0.5
};

HeatmapMatrix normalize_costs_for_heatmap(const PerformanceMatrix& matrix);

/// Per-row min-max scaling to [0,1]; constant rows map to 0.5 and infinite
/// entries to 1 (finite entries are scaled among themselves).
std::vector<double> min_max_scale(std::span<const double> row);

// ---------------------------------------------------------------------------
// Report files

struct AnalysisInputs {
  std::vector<RunRecord> records;
  /// Per task type, dev and test task ids (from a subset selection). When absent
  /// for a type, tasks are split alternately by sorted id.
  std::map<TaskType, std::pair<std::vector<std::string>, std::vector<std::string>>> subsets;
  std::vector<double> fractions = default_fraction_grid();
  double alpha = 0.05;
};

/// Writes ranks.csv, friedman.json, cd.json, rank_over_time.csv, heatmap.csv and
/// ranking_validation.csv into `out_dir`, one section per task type with at
/// least two optimizers. Returns the files written.
std::vector<std::filesystem::path> write_analysis_reports(const AnalysisInputs& inputs,
                                                          const std::filesystem::path& out_dir);

/// Reads the dev/test lists of a subset.json written by the subselect command.
std::map<TaskType, std::pair<std::vector<std::string>, std::vector<std::string>>>
read_subsets_file(const std::filesystem::path& path);

}  // namespace bbkit
