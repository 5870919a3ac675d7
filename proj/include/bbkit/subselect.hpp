#pragma once

// Representative task subsets: each task becomes a point of per-optimizer
// scaled performance, and k-subsets of low star discrepancy are searched with a
// swap local search.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bbkit/analysis.hpp"
#include "bbkit/discrepancy.hpp"
#include "bbkit/rng.hpp"

namespace bbkit {

struct PerformancePoint {
  std::string task_id;
  std::vector<double> y;  // one component per optimizer, in [0,1]
  bool degenerate = false;  // all optimizer means equal, mapped to 0.5
};

/// Per task, min-max scaling of the optimizer means (constant rows -> 0.5).
std::vector<PerformancePoint> build_points(const PerformanceMatrix& matrix);
/// aggregate() followed by the scaling above; MO tasks score negated hypervolume.
std::vector<PerformancePoint> build_points(const std::vector<RunRecord>& records);

enum class Transform { Identity, Log };
std::string_view to_string(Transform t);
Transform parse_transform(std::string_view text);

inline constexpr double kLogEpsilon = 1e-8;

/// y' = log10(y + 1e-8), then per-component min-max back to [0,1]. Throws
/// DomainError for negative components.
std::vector<PerformancePoint> transform_log(std::vector<PerformancePoint> points);
std::vector<PerformancePoint> apply_transform(std::vector<PerformancePoint> points, Transform t);

PointSet to_point_set(const std::vector<PerformancePoint>& points);

enum class Measure { Lebesgue, Empirical };

struct SwapOptions {
  bool brute = true;
  std::size_t window = 10;  // neighbours per side in the worst-box dimension
  Measure measure = Measure::Lebesgue;
  ExactOptions exact;
};

struct SwapResult {
  std::vector<std::size_t> subset;  // ascending indices into the point set
  double discrepancy = 0.0;
  double initial = 0.0;             // discrepancy of the random start
  std::vector<double> accepted;     // discrepancy after every accepted swap
};

/// Objective of a subset under `measure` (Lebesgue: its star discrepancy;
/// Empirical: distance to the full set's empirical distribution).
DiscrepancyResult subset_discrepancy(const PointSet& points, std::span<const std::size_t> subset,
                                     Measure measure, const ExactOptions& exact = {});

/// Random k-subset, then first-improvement swaps around the worst box until no
/// neighbour swap helps; with `brute`, every remaining swap is checked before
/// stopping. Throws SpecError unless 1 <= k <= n.
SwapResult swap_heuristic(const PointSet& points, std::size_t k, Rng& rng,
                          const SwapOptions& options = {});

/// Best of `restarts` independent runs (ties keep the earliest). Restart r uses
/// derive_seed(seed, r), so the result does not depend on `workers`.
SwapResult multi_restart(const PointSet& points, std::size_t k, std::size_t restarts,
                         std::uint64_t seed, const SwapOptions& options = {},
                         std::size_t workers = 1);

struct DoubleSelection {
  std::vector<std::size_t> dev;
  std::vector<std::size_t> test;
  double d_dev = 0.0;
  double d_test = 0.0;
};

/// Dev subset from all points, test subset from the remaining n-k. Throws SpecError if 2k > n.
DoubleSelection double_select(const PointSet& points, std::size_t k, std::size_t restarts,
                              std::uint64_t seed, const SwapOptions& options = {},
                              std::size_t workers = 1);

/// {10, 20, ..., 100} capped at n/2.
std::vector<std::size_t> default_k_candidates(std::size_t n);
/// default_k_candidates, or every k in [ceil(n/4), n/2] when that list is empty.
std::vector<std::size_t> auto_k_candidates(std::size_t n);

struct KSweepRow {
  std::size_t k = 0;
  DoubleSelection selection;
  double sum() const { return selection.d_dev + selection.d_test; }
};

struct KSweep {
  std::vector<KSweepRow> rows;
  std::size_t chosen = 0;  // index into rows: smallest sum, ties to the smaller k
};

/// double_select for every candidate k (seed stream derive_seed(seed, k)).
/// Throws SpecError when no candidate satisfies 1 <= k <= n/2.
KSweep k_sweep(const PointSet& points, std::vector<std::size_t> candidates, std::size_t restarts,
               std::uint64_t seed, const SwapOptions& options = {}, std::size_t workers = 1);

struct DecisionCandidate {
  std::size_t k = 0;
  Transform transform = Transform::Identity;
  double d_dev = 0.0;
  double d_test = 0.0;
  RankReport dev;
  RankReport test;
};

struct Decision {
  std::size_t index = 0;  // into the candidate list
  bool degraded = false;
  std::vector<std::string> relaxed;  // "rank_order", "significance"
};

/// Keeps candidates with identical dev/test rank order, then those significant
/// on both sets, then takes the smallest d_dev + d_test (ties: first). A filter
/// that would empty the pool is skipped and reported in `relaxed`.
Decision config_decision_rule(const std::vector<DecisionCandidate>& candidates);

struct SubsetResult {
  TaskType task_type = TaskType::BB;
  std::vector<std::string> dev;
  std::vector<std::string> test;
  std::size_t k = 0;
  Transform transform = Transform::Identity;
  double d_dev = 0.0;
  double d_test = 0.0;
  std::size_t restarts = 0;
  bool brute = true;
  bool degraded = false;
  std::vector<std::string> relaxed;
  std::vector<std::string> degenerate_tasks;
};

Json to_json(const SubsetResult& r);
SubsetResult subset_result_from_json(const Json& j);

}  // namespace bbkit
