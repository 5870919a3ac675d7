#include <algorithm>

#include "bbkit/errors.hpp"
#include "bbkit/subselect.hpp"

namespace bbkit {

DoubleSelection double_select(const PointSet& points, std::size_t k, std::size_t restarts,
                              std::uint64_t seed, const SwapOptions& options, std::size_t workers) {
  const std::size_t n = points.size();
  if (k < 1 || 2 * k > n)
    throw SpecError("double selection needs 1 <= k and 2k <= n (k=" + std::to_string(k) +
                    ", n=" + std::to_string(n) + ")");
  DoubleSelection out;
  const SwapResult dev = multi_restart(points, k, restarts, derive_seed(seed, 0), options, workers);
  out.dev = dev.subset;
  out.d_dev = dev.discrepancy;

  std::vector<char> taken(n, 0);
  for (std::size_t i : out.dev) taken[i] = 1;
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < n; ++i)
    if (!taken[i]) remaining.push_back(i);
  const PointSet rest = points.subset(remaining);
  const SwapResult test = multi_restart(rest, k, restarts, derive_seed(seed, 1), options, workers);
  for (std::size_t i : test.subset) out.test.push_back(remaining[i]);
  out.d_test = test.discrepancy;
  return out;
}

std::vector<std::size_t> default_k_candidates(std::size_t n) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 10; k <= 100 && k <= n / 2; k += 10) ks.push_back(k);
  return ks;
}

std::vector<std::size_t> auto_k_candidates(std::size_t n) {
  auto ks = default_k_candidates(n);
  if (!ks.empty()) return ks;
  for (std::size_t k = std::max<std::size_t>(1, (n + 3) / 4); k <= n / 2; ++k) ks.push_back(k);
  return ks;
}

KSweep k_sweep(const PointSet& points, std::vector<std::size_t> candidates, std::size_t restarts,
               std::uint64_t seed, const SwapOptions& options, std::size_t workers) {
  const std::size_t n = points.size();
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::erase_if(candidates, [n](std::size_t k) { return k < 1 || 2 * k > n; });
  if (candidates.empty())
    throw SpecError("no feasible subset size for " + std::to_string(n) + " points");

  KSweep sweep;
  for (std::size_t k : candidates)
    sweep.rows.push_back({k, double_select(points, k, restarts, derive_seed(seed, k), options, workers)});
  for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    if (sweep.rows[i].sum() < sweep.rows[sweep.chosen].sum()) sweep.chosen = i;
  return sweep;
}

Decision config_decision_rule(const std::vector<DecisionCandidate>& candidates) {
  if (candidates.empty()) throw SpecError("decision rule needs at least one candidate");
  Decision d;
  std::vector<std::size_t> pool(candidates.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;

  const auto filter = [&](const char* name, auto keep) {
    std::vector<std::size_t> next;
    for (std::size_t i : pool)
      if (keep(candidates[i])) next.push_back(i);
    if (next.empty()) {
      d.degraded = true;
      d.relaxed.emplace_back(name);
    } else {
      pool = std::move(next);
    }
  };
  filter("rank_order", [](const DecisionCandidate& c) {
    return ranking_validation(c.dev, c.test).consistent;
  });
  filter("significance", [](const DecisionCandidate& c) {
    return c.dev.friedman.significant && c.test.friedman.significant;
  });

  d.index = pool.front();
  for (std::size_t i : pool)
    if (candidates[i].d_dev + candidates[i].d_test <
        candidates[d.index].d_dev + candidates[d.index].d_test)
      d.index = i;
  return d;
}

}  // namespace bbkit
