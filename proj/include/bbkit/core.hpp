#pragma once

// Domain types shared by every module: configuration spaces, trials, tasks,
// histories and incumbent trajectories. All objectives are minimized.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bbkit/rng.hpp"

namespace bbkit {

// ---------------------------------------------------------------------------
// Configuration space

enum class ParamKind { Float, Int, Ordinal, Categorical };

std::string_view to_string(ParamKind kind);
ParamKind parse_param_kind(std::string_view text);

struct HyperparameterDef {
  std::string name;
  ParamKind kind = ParamKind::Float;
  double lower = 0.0;  // float/int only
  double upper = 1.0;
  bool log_scale = false;            // float only
  std::vector<std::string> choices;  // ordinal (ordered) / categorical

  static HyperparameterDef make_float(std::string name, double lower, double upper,
                                      bool log_scale = false);
  static HyperparameterDef make_int(std::string name, std::int64_t lower, std::int64_t upper);
  static HyperparameterDef make_ordinal(std::string name, std::vector<std::string> choices);
  static HyperparameterDef make_categorical(std::string name, std::vector<std::string> choices);

  bool numeric() const { return kind == ParamKind::Float || kind == ParamKind::Int; }
  bool operator==(const HyperparameterDef&) const = default;
};

/// Flat product space. Throws SpecError on construction when a definition is invalid.
class ConfigSpace {
 public:
  ConfigSpace() = default;
  explicit ConfigSpace(std::vector<HyperparameterDef> params);

  const std::vector<HyperparameterDef>& params() const { return params_; }
  std::size_t dimension() const { return params_.size(); }
  const HyperparameterDef* find(std::string_view name) const;

  bool operator==(const ConfigSpace&) const = default;

 private:
  std::vector<HyperparameterDef> params_;
};

using ParamValue = std::variant<double, std::int64_t, std::string>;

struct Configuration {
  std::map<std::string, ParamValue> values;
  bool operator==(const Configuration&) const = default;
};

struct Violation {
  std::string param;
  std::string message;  // "out of bounds", "missing value", "unknown parameter", "wrong type", "unknown choice"
};

/// Every violation of `config` against `space`; empty means valid.
std::vector<Violation> validate_config(const ConfigSpace& space, const Configuration& config);

Configuration sample_config(const ConfigSpace& space, Rng& rng);

/// Position of a value inside [0, 1]: floats linearly (or in log space), ints and
/// ordinals by rank, categoricals by index. `decode_unit` is its (rounding) inverse.
double encode_unit(const HyperparameterDef& def, const ParamValue& value);
ParamValue decode_unit(const HyperparameterDef& def, double u);
std::vector<double> encode_unit(const ConfigSpace& space, const Configuration& config);
Configuration decode_unit(const ConfigSpace& space, std::span<const double> u);

/// Values of an all-numeric configuration in parameter order.
std::vector<double> numeric_vector(const ConfigSpace& space, const Configuration& config);

// ---------------------------------------------------------------------------
// Trials

struct TrialInfo {
  Configuration config;
  std::optional<double> budget;  // fidelity F
  std::optional<std::string> instance;
  std::optional<std::int64_t> seed;
  std::optional<std::string> name;
  std::optional<std::string> checkpoint;
  bool operator==(const TrialInfo&) const = default;
};

enum class TrialStatus { Ok, Failed };

struct TrialValue {
  std::vector<double> objectives;
  double cost = 0.0;
  TrialStatus status = TrialStatus::Ok;

  bool ok() const { return status == TrialStatus::Ok; }
  /// NaN-aware equality (a failed trial's NaN objectives compare equal).
  bool operator==(const TrialValue& other) const;
};

// ---------------------------------------------------------------------------
// Tasks

enum class TaskType { BB, MF, MO, MOMF };

std::string_view to_string(TaskType type);
TaskType parse_task_type(std::string_view text);
inline bool is_multi_fidelity(TaskType t) { return t == TaskType::MF || t == TaskType::MOMF; }
inline bool is_multi_objective(TaskType t) { return t == TaskType::MO || t == TaskType::MOMF; }

struct FidelitySpace {
  std::string name = "budget";
  double min_budget = 1.0;
  double max_budget = 1.0;
  bool operator==(const FidelitySpace&) const = default;
};

class ObjectiveFunction {
 public:
  virtual ~ObjectiveFunction() = default;
  /// May throw; the runner records a throwing evaluation as a failed trial.
  virtual TrialValue evaluate(const TrialInfo& info) const = 0;
};

/// ceil(20 + 40 sqrt(d)); throws SpecError for d < 1.
std::int64_t budget_formula(std::int64_t d);

struct Task {
  std::string id;
  std::shared_ptr<const ObjectiveFunction> objective;
  TaskType task_type = TaskType::BB;
  ConfigSpace config_space;
  std::size_t n_objectives = 1;
  std::optional<FidelitySpace> fidelity;
  std::optional<std::string> instance;
  std::size_t n_trials = 0;

  /// Builds a task with n_trials = budget_formula(d), checking the type/objective/fidelity invariants.
  static Task make(std::string id, std::shared_ptr<const ObjectiveFunction> objective,
                   TaskType type, ConfigSpace space, std::size_t n_objectives,
                   std::optional<FidelitySpace> fidelity = std::nullopt,
                   std::optional<std::string> instance = std::nullopt);
};

// ---------------------------------------------------------------------------
// Histories and trajectories

struct Trial {
  TrialInfo info;
  TrialValue value;
  bool operator==(const Trial&) const = default;
};

struct History {
  std::vector<Trial> entries;
  std::size_t size() const { return entries.size(); }
  bool operator==(const History&) const = default;
};

/// One incumbent change: after `step` trials (1-based) the incumbent is the set
/// of history indices `incumbents` (one index for single-objective tasks).
struct TrajectoryEntry {
  std::size_t step = 0;
  std::vector<std::size_t> incumbents;
  bool operator==(const TrajectoryEntry&) const = default;
};

struct Trajectory {
  std::vector<TrajectoryEntry> entries;

  bool empty() const { return entries.empty(); }
  /// Incumbent in force after `step` trials, or nullptr if none yet.
  const TrajectoryEntry* at_step(std::size_t step) const;
  bool operator==(const Trajectory&) const = default;
};

/// What update_incumbent needs to know about a task.
struct IncumbentPolicy {
  std::size_t n_objectives = 1;
  std::optional<double> max_budget;  // set for multi-fidelity tasks

  static IncumbentPolicy of(const Task& task);
};

/// Indices of the points that no other point strictly dominates (minimization).
/// Throws SpecError when vectors differ in length.
std::vector<std::size_t> pareto_front(std::span<const std::vector<double>> points);

/// Incumbent trajectory of a history. Failed trials never become incumbents.
/// Trials at the highest fidelity (or without a budget) take precedence over
/// lower-fidelity ones as soon as one exists.
Trajectory update_incumbent(const History& history, const IncumbentPolicy& policy);
Trajectory update_incumbent(const History& history, const Task& task);

}  // namespace bbkit
