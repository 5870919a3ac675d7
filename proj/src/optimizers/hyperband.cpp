#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bbkit/errors.hpp"
#include "bbkit/optimizers.hpp"

namespace bbkit {

namespace {

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

bool usable(const TrialValue& v) {
  return v.ok() && !v.objectives.empty() &&
         std::all_of(v.objectives.begin(), v.objectives.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<Bracket> hyperband_brackets(double min_budget, double max_budget, int eta) {
  if (eta < 2) throw SpecError("hyperband: eta must be >= 2");
  if (!(std::isfinite(min_budget) && std::isfinite(max_budget) && min_budget > 0.0 &&
        min_budget <= max_budget))
    throw SpecError("hyperband: budgets must satisfy 0 < min_budget <= max_budget");

  const auto e = static_cast<std::uint64_t>(eta);
  int s_max = 0;
  while (s_max < 62 &&
         min_budget * static_cast<double>(ipow(e, s_max + 1)) <= max_budget * (1.0 + 1e-12))
    ++s_max;

  std::vector<Bracket> brackets;
  for (int s = s_max; s >= 0; --s) {
    const std::uint64_t num = static_cast<std::uint64_t>(s_max + 1) * ipow(e, s);
    const std::uint64_t n = (num + static_cast<std::uint64_t>(s)) / static_cast<std::uint64_t>(s + 1);
    Bracket b{s, {}};
    for (int i = 0; i <= s; ++i)
      b.rungs.push_back({static_cast<std::size_t>(n / ipow(e, i)),
                         max_budget / static_cast<double>(ipow(e, s - i))});
    brackets.push_back(std::move(b));
  }
  return brackets;
}

HyperbandOptimizer::HyperbandOptimizer(const Task& task, std::uint64_t seed, int eta,
                                       bool single_bracket)
    : Optimizer(task, seed), eta_(eta), single_bracket_(single_bracket) {
  if (!task.fidelity) throw SpecError(id() + " needs a multi-fidelity task");
  schedule_ = hyperband_brackets(task.fidelity->min_budget, task.fidelity->max_budget, eta_);
  if (single_bracket_) schedule_.resize(1);
}

TrialInfo HyperbandOptimizer::propose() {
  auto it = std::find_if(runs_.begin(), runs_.end(),
                         [](const auto& kv) { return kv.second.issued < kv.second.queue.size(); });
  if (it == runs_.end()) {
    // Every open rung waits for results: start the next bracket alongside.
    Run run;
    run.bracket = next_bracket_;
    next_bracket_ = (next_bracket_ + 1) % schedule_.size();
    const std::size_t n0 = schedule_[run.bracket].rungs.front().n_configs;
    for (std::size_t i = 0; i < n0; ++i) run.queue.push_back(sample());
    it = runs_.emplace(next_run_id_++, std::move(run)).first;
  }
  Run& run = it->second;
  TrialInfo info;
  info.config = run.queue[run.issued++];
  info.budget = schedule_[run.bracket].rungs[run.rung].budget;
  trial_run_[next_name()] = it->first;
  return info;
}

std::vector<std::size_t> HyperbandOptimizer::order(const std::vector<Result>& results) const {
  std::vector<std::size_t> idx(results.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (task_.n_objectives == 1) {
    const auto key = [&](std::size_t i) {
      return usable(results[i].value) ? results[i].value.objectives[0]
                                      : std::numeric_limits<double>::infinity();
    };
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return idx;
  }
  // Non-dominated sorting; failed trials go last.
  std::vector<std::size_t> rank(results.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> remaining;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (usable(results[i].value)) remaining.push_back(i);
  for (std::size_t level = 0; !remaining.empty(); ++level) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i : remaining) pts.push_back(results[i].value.objectives);
    const auto front = pareto_front(pts);
    std::vector<std::size_t> rest;
    std::size_t f = 0;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      if (f < front.size() && front[f] == k) {
        rank[remaining[k]] = level;
        ++f;
      } else {
        rest.push_back(remaining[k]);
      }
    }
    remaining = std::move(rest);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  return idx;
}

void HyperbandOptimizer::promote(Run& run) {
  const auto& rungs = schedule_[run.bracket].rungs;
  const std::size_t keep = rungs[run.rung + 1].n_configs;
  const auto idx = order(run.results);
  std::vector<Configuration> next;
  for (std::size_t i = 0; i < keep && i < idx.size(); ++i) next.push_back(run.results[idx[i]].config);
  run.queue = std::move(next);
  run.results.clear();
  run.issued = 0;
  ++run.rung;
}

void HyperbandOptimizer::observe(const TrialInfo& info, const TrialValue& value) {
  auto tr = trial_run_.find(*info.name);
  if (tr == trial_run_.end()) return;
  const std::uint64_t run_id = tr->second;
  trial_run_.erase(tr);
  auto it = runs_.find(run_id);
  if (it == runs_.end()) return;
  Run& run = it->second;
  run.results.push_back({info.config, value});
  const auto& rungs = schedule_[run.bracket].rungs;
  if (run.results.size() < run.queue.size()) return;
  if (run.rung + 1 == rungs.size()) {
    runs_.erase(it);
  } else {
    promote(run);
  }
}

}  // namespace bbkit
