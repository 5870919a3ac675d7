#include <algorithm>
#include <cmath>

#include "bbkit/errors.hpp"
#include "bbkit/optimizers.hpp"

namespace bbkit {

DifferentialEvolution::DifferentialEvolution(const Task& task, std::uint64_t seed,
                                             std::size_t pop_size, double weight,
                                             double crossover)
    : Optimizer(task, seed), pop_size_(pop_size), weight_(weight), crossover_(crossover) {
  if (pop_size_ < 4) throw SpecError("DifferentialEvolution needs pop_size >= 4");
}

TrialInfo DifferentialEvolution::propose() {
  const ConfigSpace& space = task_.config_space;
  const auto init_pending = static_cast<std::size_t>(
      std::count_if(targets_.begin(), targets_.end(), [](const auto& kv) { return !kv.second; }));

  TrialInfo info;
  info.budget = full_budget();
  if (population_.size() + init_pending < pop_size_ || population_.size() < 4) {
    info.config = sample();
    targets_[next_name()] = std::nullopt;
    return info;
  }

  const std::size_t n = population_.size();
  const std::size_t target = next_target_++ % n;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t r[3];
  for (int k = 0; k < 3; ++k) {
    std::size_t c;
    do {
      c = pick(rng_);
    } while (c == target || std::find(r, r + k, c) != r + k);
    r[k] = c;
  }
  const std::size_t d = space.dimension();
  std::uniform_int_distribution<std::size_t> pick_dim(0, d - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t forced = pick_dim(rng_);
  std::vector<double> u = population_[target].u;
  for (std::size_t j = 0; j < d; ++j) {
    if (j == forced || coin(rng_) < crossover_) {
      double m = population_[r[0]].u[j] + weight_ * (population_[r[1]].u[j] - population_[r[2]].u[j]);
      // Reflect back into the unit interval.
      if (m < 0.0) m = -m;
      if (m > 1.0) m = 2.0 - m;
      u[j] = std::clamp(m, 0.0, 1.0);
    }
  }
  info.config = decode_unit(space, u);
  targets_[next_name()] = target;
  return info;
}

bool DifferentialEvolution::better(const std::vector<double>& trial,
                                   const std::vector<double>& target) {
  if (trial.size() == 1) return trial[0] <= target[0];
  bool trial_worse = false, target_worse = false;
  for (std::size_t i = 0; i < trial.size(); ++i) {
    if (trial[i] > target[i]) trial_worse = true;
    if (target[i] > trial[i]) target_worse = true;
  }
  if (!trial_worse) return true;    // weakly dominates
  if (!target_worse) return false;  // dominated
  return std::bernoulli_distribution(0.5)(rng_);
}

void DifferentialEvolution::observe(const TrialInfo& info, const TrialValue& value) {
  auto it = targets_.find(*info.name);
  if (it == targets_.end()) return;
  const std::optional<std::size_t> target = it->second;
  targets_.erase(it);
  if (!value.ok() || !std::all_of(value.objectives.begin(), value.objectives.end(),
                                  [](double v) { return std::isfinite(v); }))
    return;
  Member m{encode_unit(task_.config_space, info.config), value.objectives};
  if (target) {
    if (better(m.objectives, population_[*target].objectives)) population_[*target] = std::move(m);
    return;
  }
  if (population_.size() < pop_size_) {
    population_.push_back(std::move(m));
  } else if (m.objectives.size() == 1) {
    auto worst = std::max_element(population_.begin(), population_.end(),
                                  [](const Member& a, const Member& b) {
                                    return a.objectives[0] < b.objectives[0];
                                  });
    if (m.objectives[0] < worst->objectives[0]) *worst = std::move(m);
  }
}

}  // namespace bbkit
