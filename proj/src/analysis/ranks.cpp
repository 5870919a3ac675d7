#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "bbkit/analysis.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

namespace {

// NaN sorts last, after +inf.
bool less_nan_last(double a, double b) {
  if (std::isnan(a)) return false;
  if (std::isnan(b)) return true;
  return a < b;
}

bool same_value(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

// Studentized range quantiles over sqrt 2 (Demsar 2006 for K <= 10, extended
// to K = 20 from the studentized range distribution with infinite df).
constexpr std::array<double, 19> kQ05 = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031,
                                         3.102, 3.164, 3.219, 3.268, 3.313, 3.354, 3.391,
                                         3.426, 3.458, 3.489, 3.517, 3.544};
constexpr std::array<double, 19> kQ10 = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780,
                                         2.855, 2.920, 2.978, 3.030, 3.077, 3.120, 3.159,
                                         3.196, 3.230, 3.261, 3.291, 3.319};

}  // namespace

std::vector<double> average_ranks(std::span<const double> row) {
  std::vector<std::size_t> idx(row.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return less_nan_last(row[a], row[b]); });
  std::vector<double> ranks(row.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && same_value(row[idx[j + 1]], row[idx[i]])) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::vector<std::vector<double>> rank_rows(const PerformanceMatrix& matrix) {
  std::vector<std::vector<double>> out;
  out.reserve(matrix.values.size());
  for (const auto& row : matrix.values) out.push_back(average_ranks(row));
  return out;
}

std::vector<double> mean_ranks(const PerformanceMatrix& matrix) {
  std::vector<double> mean(matrix.n_optimizers(), 0.0);
  const auto ranks = rank_rows(matrix);
  for (const auto& row : ranks)
    for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
  for (double& m : mean) m /= static_cast<double>(ranks.size());
  return mean;
}

FriedmanResult friedman_test(const PerformanceMatrix& matrix, double alpha) {
  FriedmanResult r;
  const std::size_t n = matrix.n_tasks();
  const std::size_t k = matrix.n_optimizers();
  if (k < 3 || n < 2) return r;
  r.applicable = true;

  const auto ranks = rank_rows(matrix);
  double ties = 0.0;
  for (const auto& row : ranks) {
    std::vector<double> sorted(row);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      ties += t * t * t - t;
      i = j + 1;
    }
  }
  const double N = static_cast<double>(n), K = static_cast<double>(k);
  const double correction = 1.0 - ties / (N * K * (K * K - 1.0));
  if (correction <= 1e-12) return r;  // every row fully tied

  const auto mean = mean_ranks(matrix);
  double sum_sq = 0.0;
  for (double m : mean) sum_sq += m * m;
  const double stat = 12.0 * N / (K * (K + 1.0)) * (sum_sq - K * (K + 1.0) * (K + 1.0) / 4.0);
  r.statistic = std::max(0.0, stat / correction);
  const boost::math::chi_squared dist(K - 1.0);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  r.significant = r.p_value < alpha;
  return r;
}

double nemenyi_q(std::size_t k, double alpha) {
  if (k < 2 || k > 20) throw SpecError("Nemenyi table covers 2 to 20 optimizers, got " + std::to_string(k));
  if (std::abs(alpha - 0.05) < 1e-12) return kQ05[k - 2];
  if (std::abs(alpha - 0.10) < 1e-12) return kQ10[k - 2];
  throw SpecError("Nemenyi table covers alpha 0.05 and 0.10 only");
}

double nemenyi_cd(std::size_t k, std::size_t n, double alpha) {
  if (n == 0) throw SpecError("critical difference needs at least one task");
  const double K = static_cast<double>(k);
  return nemenyi_q(k, alpha) * std::sqrt(K * (K + 1.0) / (6.0 * static_cast<double>(n)));
}

RankReport rank_report(const PerformanceMatrix& matrix, double alpha) {
  if (matrix.n_tasks() == 0) throw SpecError("rank report needs at least one task");
  RankReport r;
  r.optimizers = matrix.optimizers;
  r.mean_ranks = mean_ranks(matrix);
  r.friedman = friedman_test(matrix, alpha);
  r.alpha = alpha;
  r.n_tasks = matrix.n_tasks();
  r.cd = nemenyi_cd(matrix.n_optimizers(), matrix.n_tasks(), alpha);
  const std::size_t k = r.optimizers.size();
  r.separated.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      r.separated[i][j] = std::abs(r.mean_ranks[i] - r.mean_ranks[j]) > r.cd;
  return r;
}

std::vector<int> rank_positions(std::span<const double> mean_ranks) {
  constexpr double tol = 1e-9;
  std::vector<int> pos(mean_ranks.size());
  for (std::size_t i = 0; i < mean_ranks.size(); ++i) {
    int count = 0;
    for (double v : mean_ranks) count += v <= mean_ranks[i] + tol;
    pos[i] = count;
  }
  return pos;
}

RankingValidation ranking_validation(const RankReport& dev, const RankReport& test) {
  std::vector<std::string> a(dev.optimizers), b(test.optimizers);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw SpecError("dev and test reports cover different optimizers");

  // Align test to the dev optimizer order.
  std::vector<double> test_ranks;
  for (const auto& id : dev.optimizers) {
    const auto it = std::find(test.optimizers.begin(), test.optimizers.end(), id);
    test_ranks.push_back(test.mean_ranks[static_cast<std::size_t>(it - test.optimizers.begin())]);
  }
  const auto dev_pos = rank_positions(dev.mean_ranks);
  const auto test_pos = rank_positions(test_ranks);

  RankingValidation v;
  v.dev_significant = dev.friedman.significant;
  v.test_significant = test.friedman.significant;
  v.dev_cd = dev.cd;
  v.test_cd = test.cd;
  v.consistent = dev_pos == test_pos;
  for (std::size_t i = 0; i < dev.optimizers.size(); ++i)
    v.rows.push_back({dev.optimizers[i], dev.mean_ranks[i], dev_pos[i], test_ranks[i], test_pos[i]});

  const auto order = [](int x, int y) { return (x > y) - (x < y); };
  for (std::size_t i = 0; i < dev.optimizers.size(); ++i)
    for (std::size_t j = i + 1; j < dev.optimizers.size(); ++j) {
      if (order(dev_pos[i], dev_pos[j]) == order(test_pos[i], test_pos[j])) continue;
      if (std::abs(dev.mean_ranks[i] - dev.mean_ranks[j]) <= dev.cd &&
          std::abs(test_ranks[i] - test_ranks[j]) <= test.cd)
        v.within_cd_swaps.emplace_back(dev.optimizers[i], dev.optimizers[j]);
    }
  return v;
}

std::string format_rank_cell(double mean_rank, int position) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f (%d)", mean_rank, position);
  return buf;
}

std::string format_rank_row(const RankReport& report) {
  const auto pos = rank_positions(report.mean_ranks);
  std::string out;
  for (std::size_t i = 0; i < pos.size(); ++i) out += format_rank_cell(report.mean_ranks[i], pos[i]) + " & ";
  return out + (report.friedman.significant ? "yes" : "no");
}

std::vector<double> min_max_scale(std::span<const double> row) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : row)
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  std::vector<double> out;
  out.reserve(row.size());
  for (double v : row) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      out.push_back(1.0);
    else if (v == -std::numeric_limits<double>::infinity())
      out.push_back(0.0);
    else if (hi > lo)
      out.push_back((v - lo) / (hi - lo));
    else
      out.push_back(0.5);
  }
  return out;
}

HeatmapMatrix normalize_costs_for_heatmap(const PerformanceMatrix& matrix) {
  HeatmapMatrix h;
  h.raw = matrix;
  for (const auto& row : matrix.values) h.normalized.push_back(min_max_scale(row));
  return h;
}

}  // namespace bbkit
