#include <algorithm>
#include <cmath>

#include "bbkit/core.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

namespace {

bool usable(const Trial& t, std::size_t n_objectives) {
  if (!t.value.ok() || t.value.objectives.size() != n_objectives) return false;
  return std::all_of(t.value.objectives.begin(), t.value.objectives.end(),
                     [](double v) { return std::isfinite(v); });
}

bool at_full_fidelity(const Trial& t, const IncumbentPolicy& policy) {
  return !policy.max_budget || !t.info.budget || *t.info.budget >= *policy.max_budget;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

}  // namespace

Trajectory update_incumbent(const History& history, const IncumbentPolicy& policy) {
  Trajectory traj;
  bool have_full = false;
  std::vector<std::size_t> current;

  for (std::size_t i = 0; i < history.entries.size(); ++i) {
    const Trial& trial = history.entries[i];
    if (!usable(trial, policy.n_objectives)) continue;
    const bool full = at_full_fidelity(trial, policy);
    if (have_full && !full) continue;

    std::vector<std::size_t> next;
    if (full && !have_full) {
      // First full-fidelity result replaces whatever low-fidelity incumbent existed.
      have_full = true;
      next = {i};
    } else if (policy.n_objectives == 1) {
      const double v = trial.value.objectives[0];
      if (current.empty() || v < history.entries[current[0]].value.objectives[0]) {
        next = {i};
      } else {
        continue;
      }
    } else {
      const auto& y = trial.value.objectives;
      bool dominated = false;
      for (std::size_t j : current)
        if (dominates(history.entries[j].value.objectives, y)) {
          dominated = true;
          break;
        }
      if (dominated) continue;
      for (std::size_t j : current)
        if (!dominates(y, history.entries[j].value.objectives)) next.push_back(j);
      next.push_back(i);
    }
    current = std::move(next);
    traj.entries.push_back({i + 1, current});
  }
  return traj;
}

Trajectory update_incumbent(const History& history, const Task& task) {
  return update_incumbent(history, IncumbentPolicy::of(task));
}

}  // namespace bbkit
