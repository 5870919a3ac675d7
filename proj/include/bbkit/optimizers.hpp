#pragma once

// Ask-and-tell optimizers. The base class owns the protocol bookkeeping
// (pending trials, budget guard); variants implement propose()/observe().

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bbkit/core.hpp"
#include "bbkit/serialize.hpp"

namespace bbkit {

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  Optimizer(const Optimizer&) = delete;
  Optimizer& operator=(const Optimizer&) = delete;

  /// Next trial to evaluate. Throws ExhaustedError once n_trials asks were issued.
  TrialInfo ask();
  /// Report the result of an asked trial. Throws ProtocolError for unknown or repeated trials.
  void tell(const TrialInfo& info, const TrialValue& value);

  std::size_t pending() const { return pending_.size(); }
  std::size_t asked() const { return asked_; }
  const Task& task() const { return task_; }
  virtual std::string id() const = 0;

 protected:
  Optimizer(const Task& task, std::uint64_t seed);

  virtual TrialInfo propose() = 0;
  virtual void observe(const TrialInfo& info, const TrialValue& value) = 0;

  Configuration sample() { return sample_config(task_.config_space, rng_); }
  /// Full-fidelity budget for multi-fidelity tasks, nullopt otherwise.
  std::optional<double> full_budget() const;

  /// Name the base class will give the trial currently being proposed.
  std::string next_name() const { return "trial-" + std::to_string(asked_); }

  const Task& task_;
  Rng rng_;

 private:
  std::map<std::string, TrialInfo> pending_;
  std::set<std::string> told_;
  std::size_t asked_ = 0;
};

/// Uniform prior sampling; multi-fidelity tasks are evaluated at the maximum budget.
class RandomSearch final : public Optimizer {
 public:
  RandomSearch(const Task& task, std::uint64_t seed) : Optimizer(task, seed) {}
  std::string id() const override { return "RandomSearch"; }

 protected:
  TrialInfo propose() override;
  void observe(const TrialInfo&, const TrialValue&) override {}
};

/// (1+1)-ES on the unit-encoded space with 1/5-success step-size adaptation.
/// Ordinals move one step, categoricals are resampled with probability 0.2.
class OnePlusOneES final : public Optimizer {
 public:
  OnePlusOneES(const Task& task, std::uint64_t seed, double sigma0 = 0.2);
  std::string id() const override { return "OnePlusOneES"; }

  const std::optional<Configuration>& parent() const { return parent_; }
  double sigma() const { return sigma_; }

 protected:
  TrialInfo propose() override;
  void observe(const TrialInfo& info, const TrialValue& value) override;

 private:
  Configuration mutate(const Configuration& parent);

  std::optional<Configuration> parent_;
  double parent_value_ = 0.0;
  double sigma_;
};

/// Asynchronous DE/rand/1/bin. Multi-objective tasks replace a target when the
/// trial dominates it (or, when mutually non-dominated, on a fair coin).
/// Multi-fidelity is ignored: every trial runs at the maximum budget.
class DifferentialEvolution final : public Optimizer {
 public:
  DifferentialEvolution(const Task& task, std::uint64_t seed, std::size_t pop_size = 10,
                        double weight = 0.5, double crossover = 0.9);
  std::string id() const override { return "DifferentialEvolution"; }

 protected:
  TrialInfo propose() override;
  void observe(const TrialInfo& info, const TrialValue& value) override;

 private:
  struct Member {
    std::vector<double> u;
    std::vector<double> objectives;
  };
  bool better(const std::vector<double>& trial, const std::vector<double>& target);

  std::size_t pop_size_;
  double weight_;
  double crossover_;
  std::vector<Member> population_;
  std::size_t next_target_ = 0;
  std::map<std::string, std::optional<std::size_t>> targets_;  // trial name -> target slot
};

struct Rung {
  std::size_t n_configs;
  double budget;
  bool operator==(const Rung&) const = default;
};

struct Bracket {
  int s;
  std::vector<Rung> rungs;
};

/// Hyperband bracket table: s_max = floor(log_eta(max/min)); bracket s starts
/// ceil((s_max+1)/(s+1) eta^s) configs at max eta^-s and keeps floor(n/eta) per rung.
std::vector<Bracket> hyperband_brackets(double min_budget, double max_budget, int eta);

/// Hyperband over the task's fidelity range. With `single_bracket` it repeats
/// only the most aggressive bracket, i.e. successive halving. Promotion ranks
/// by objective, or by non-dominated sorting for multi-objective tasks.
class HyperbandOptimizer final : public Optimizer {
 public:
  HyperbandOptimizer(const Task& task, std::uint64_t seed, int eta = 3,
                     bool single_bracket = false);
  std::string id() const override {
    return single_bracket_ ? "SuccessiveHalving" : "Hyperband";
  }

  const std::vector<Bracket>& schedule() const { return schedule_; }

 protected:
  TrialInfo propose() override;
  void observe(const TrialInfo& info, const TrialValue& value) override;

 private:
  struct Result {
    Configuration config;
    TrialValue value;
  };
  struct Run {
    std::size_t bracket;
    std::size_t rung = 0;
    std::vector<Configuration> queue;  // configs of the current rung
    std::size_t issued = 0;
    std::vector<Result> results;
  };

  void promote(Run& run);
  std::vector<std::size_t> order(const std::vector<Result>& results) const;

  int eta_;
  bool single_bracket_;
  std::vector<Bracket> schedule_;
  std::size_t next_bracket_ = 0;
  std::map<std::uint64_t, Run> runs_;  // keyed by creation order
  std::uint64_t next_run_id_ = 0;
  std::map<std::string, std::uint64_t> trial_run_;  // trial name -> run id
};

/// Archive of told (configuration, objectives) pairs used by the Pareto-archive search.
struct ArchiveEntry {
  Configuration config;
  std::vector<double> objectives;
};

/// Next configuration of the Pareto-archive search: uniform sample for an empty
/// archive, otherwise a mutated copy of a uniformly chosen front member
/// (Gaussian, sigma = 10% of range, on numerics; categorical resample with p = 0.2).
Configuration mo_archive_select(const ConfigSpace& space, Rng& rng,
                                const std::vector<ArchiveEntry>& archive);

class ParetoArchiveSearch final : public Optimizer {
 public:
  ParetoArchiveSearch(const Task& task, std::uint64_t seed) : Optimizer(task, seed) {}
  std::string id() const override { return "ParetoArchiveSearch"; }
  const std::vector<ArchiveEntry>& archive() const { return archive_; }

 protected:
  TrialInfo propose() override;
  void observe(const TrialInfo& info, const TrialValue& value) override;

 private:
  std::vector<ArchiveEntry> archive_;
};

/// Optimizer ids: RandomSearch, OnePlusOneES, DifferentialEvolution,
/// SuccessiveHalving, Hyperband, ParetoArchiveSearch.
bool optimizer_supports(const std::string& id, TaskType type);
std::vector<std::string> optimizer_ids();
std::unique_ptr<Optimizer> make_optimizer(const std::string& id, const Json& params,
                                          const Task& task, std::uint64_t seed);

}  // namespace bbkit
