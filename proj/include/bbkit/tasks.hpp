#pragma once

// Synthetic objective suite: four single-objective and two multi-objective
// test functions with seeded instance shifts and an optional deterministic
// low-fidelity bias.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbkit/core.hpp"
#include "bbkit/serialize.hpp"

namespace bbkit {

enum class Family { Sphere, Rosenbrock, Rastrigin, Ackley, Zdt1, Dtlz2 };

std::string_view to_string(Family family);
Family parse_family(std::string_view text);

struct Box {
  double lower;
  double upper;
};

/// Canonical search box per coordinate.
Box family_box(Family family);
std::size_t family_objectives(Family family);
std::size_t family_min_dimension(Family family);
bool family_supports(Family family, TaskType type);

/// Seeded optimum shift of instance `instance`; instance 0 is unshifted.
/// Single-objective families shift every coordinate by U[-0.1 w, 0.1 w] (w = box
/// width). Multi-objective families shift only their distance variables
/// (ZDT1: U[0, 0.2], DTLZ2: U[-0.1, 0.1]) so the front shape is kept.
std::vector<double> instance_offset(Family family, std::size_t dimension, std::uint64_t instance);

/// f(x - o_instance). Throws DomainError outside the family box or below the
/// family's minimum dimension.
std::vector<double> evaluate_synthetic(Family family, std::span<const double> x,
                                       std::uint64_t instance);

struct FidelityModel {
  double min_budget = 1.0;
  double max_budget = 81.0;
  double bias_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Low-fidelity view of `full`: full + c (1 - (F - min)/(max - min)) g(x), with
/// g a seeded smooth perturbation bounded by 1. Bit-exact at F = max_budget.
std::vector<double> attach_fidelity(std::vector<double> full, std::span<const double> x,
                                    const FidelityModel& model, double fidelity);

/// ObjectiveFunction backed by a synthetic family.
class SyntheticObjective final : public ObjectiveFunction {
 public:
  SyntheticObjective(Family family, ConfigSpace space, std::uint64_t instance,
                     std::optional<FidelityModel> fidelity = std::nullopt);

  TrialValue evaluate(const TrialInfo& info) const override;

  Family family() const { return family_; }
  std::uint64_t instance() const { return instance_; }

 private:
  Family family_;
  ConfigSpace space_;
  std::uint64_t instance_;
  std::optional<FidelityModel> fidelity_;
};

/// One block of a task-set spec; expands to dimensions x instances tasks.
struct TaskSetEntry {
  Family family = Family::Sphere;
  std::vector<std::size_t> dimensions;
  std::vector<std::uint64_t> instances;
  TaskType task_type = TaskType::BB;
  double min_budget = 1.0;  // fidelity range, used by MF/MOMF only
  double max_budget = 81.0;
  double bias_scale = 1.0;
};

struct TaskSetSpec {
  std::vector<TaskSetEntry> entries;
};

using TaskSet = std::vector<Task>;

/// Task ids read "<type>/<family>/<d>/<instance>" in lower case, e.g. "bb/sphere/2/0".
TaskSet make_task_set(const TaskSetSpec& spec);

TaskSetSpec task_set_spec_from_json(const Json& j);
Json to_json(const TaskSetSpec& spec);

/// Declarative form of a single task (everything except the objective handle).
Json task_to_json(const Task& task);

}  // namespace bbkit
