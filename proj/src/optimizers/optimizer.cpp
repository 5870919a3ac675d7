#include "bbkit/errors.hpp"
#include "bbkit/optimizers.hpp"

namespace bbkit {

Optimizer::Optimizer(const Task& task, std::uint64_t seed) : task_(task), rng_(seed) {}

std::optional<double> Optimizer::full_budget() const {
  if (task_.fidelity) return task_.fidelity->max_budget;
  return std::nullopt;
}

TrialInfo Optimizer::ask() {
  if (asked_ >= task_.n_trials)
    throw ExhaustedError("task " + task_.id + ": all " + std::to_string(task_.n_trials) +
                         " trials were already asked");
  TrialInfo info = propose();
  info.name = next_name();
  if (!info.instance) info.instance = task_.instance;
  pending_.emplace(*info.name, info);
  ++asked_;
  return info;
}

void Optimizer::tell(const TrialInfo& info, const TrialValue& value) {
  if (!info.name) throw ProtocolError("tell: trial has no name and was never asked");
  auto it = pending_.find(*info.name);
  if (it == pending_.end()) {
    if (told_.count(*info.name)) throw ProtocolError("tell: trial " + *info.name + " told twice");
    throw ProtocolError("tell: trial " + *info.name + " was never asked");
  }
  if (!(it->second == info)) throw ProtocolError("tell: trial " + *info.name + " was modified");
  pending_.erase(it);
  told_.insert(*info.name);
  observe(info, value);
}

TrialInfo RandomSearch::propose() {
  TrialInfo info;
  info.config = sample();
  info.budget = full_budget();
  return info;
}

}  // namespace bbkit
