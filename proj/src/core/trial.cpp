#include <algorithm>
#include <cmath>

#include "bbkit/core.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

bool TrialValue::operator==(const TrialValue& other) const {
  if (status != other.status || objectives.size() != other.objectives.size()) return false;
  const auto same = [](double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
  };
  if (!same(cost, other.cost)) return false;
  for (std::size_t i = 0; i < objectives.size(); ++i)
    if (!same(objectives[i], other.objectives[i])) return false;
  return true;
}

std::string_view to_string(TaskType type) {
  switch (type) {
    case TaskType::BB: return "BB";
    case TaskType::MF: return "MF";
    case TaskType::MO: return "MO";
    case TaskType::MOMF: return "MOMF";
  }
  return "BB";
}

TaskType parse_task_type(std::string_view text) {
  if (text == "BB") return TaskType::BB;
  if (text == "MF") return TaskType::MF;
  if (text == "MO") return TaskType::MO;
  if (text == "MOMF") return TaskType::MOMF;
  throw SpecError("unknown task type '" + std::string(text) + "'");
}

Task Task::make(std::string id, std::shared_ptr<const ObjectiveFunction> objective,
                TaskType type, ConfigSpace space, std::size_t n_objectives,
                std::optional<FidelitySpace> fidelity, std::optional<std::string> instance) {
  if (id.empty()) throw SpecError("task id must be non-empty");
  if (!objective) throw SpecError("task " + id + " has no objective function");
  if (space.dimension() == 0) throw SpecError("task " + id + " has an empty configuration space");
  if (is_multi_fidelity(type) && !fidelity)
    throw SpecError("task " + id + ": multi-fidelity task types need a fidelity range");
  if (fidelity && !(fidelity->min_budget > 0.0 && fidelity->min_budget <= fidelity->max_budget))
    throw SpecError("task " + id + ": fidelity range must satisfy 0 < min <= max");
  if (is_multi_objective(type) && n_objectives < 2)
    throw SpecError("task " + id + ": multi-objective task types need at least 2 objectives");
  if (!is_multi_objective(type) && n_objectives != 1)
    throw SpecError("task " + id + ": single-objective task types need exactly 1 objective");
  Task t;
  t.id = std::move(id);
  t.objective = std::move(objective);
  t.task_type = type;
  t.n_trials = static_cast<std::size_t>(budget_formula(static_cast<std::int64_t>(space.dimension())));
  t.config_space = std::move(space);
  t.n_objectives = n_objectives;
  if (is_multi_fidelity(type)) t.fidelity = std::move(fidelity);
  t.instance = std::move(instance);
  return t;
}

const TrajectoryEntry* Trajectory::at_step(std::size_t step) const {
  auto it = std::upper_bound(entries.begin(), entries.end(), step,
                             [](std::size_t s, const TrajectoryEntry& e) { return s < e.step; });
  if (it == entries.begin()) return nullptr;
  return &*std::prev(it);
}

IncumbentPolicy IncumbentPolicy::of(const Task& task) {
  IncumbentPolicy p;
  p.n_objectives = task.n_objectives;
  if (task.fidelity) p.max_budget = task.fidelity->max_budget;
  return p;
}

}  // namespace bbkit
