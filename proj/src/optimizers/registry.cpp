#include "bbkit/errors.hpp"
#include "bbkit/optimizers.hpp"

namespace bbkit {

std::vector<std::string> optimizer_ids() {
  return {"RandomSearch",      "OnePlusOneES", "DifferentialEvolution",
          "SuccessiveHalving", "Hyperband",    "ParetoArchiveSearch"};
}

bool optimizer_supports(const std::string& id, TaskType type) {
  if (id == "RandomSearch") return true;
  if (id == "OnePlusOneES") return type == TaskType::BB;
  if (id == "DifferentialEvolution") return type != TaskType::MF;
  if (id == "SuccessiveHalving") return type == TaskType::MF;
  if (id == "Hyperband") return is_multi_fidelity(type);
  if (id == "ParetoArchiveSearch") return type == TaskType::MO;
  throw SpecError("unknown optimizer '" + id + "'");
}

std::unique_ptr<Optimizer> make_optimizer(const std::string& id, const Json& params,
                                          const Task& task, std::uint64_t seed) {
  if (!optimizer_supports(id, task.task_type))
    throw SpecError(id + " does not support " + std::string(to_string(task.task_type)) + " tasks");
  const Json p = params.is_object() ? params : Json::object();
  try {
    if (id == "RandomSearch") return std::make_unique<RandomSearch>(task, seed);
    if (id == "OnePlusOneES")
      return std::make_unique<OnePlusOneES>(task, seed, p.value("sigma0", 0.2));
    if (id == "DifferentialEvolution")
      return std::make_unique<DifferentialEvolution>(task, seed, p.value("pop_size", 10),
                                                     p.value("weight", 0.5),
                                                     p.value("crossover", 0.9));
    if (id == "SuccessiveHalving")
      return std::make_unique<HyperbandOptimizer>(task, seed, p.value("eta", 3), true);
    if (id == "Hyperband")
      return std::make_unique<HyperbandOptimizer>(task, seed, p.value("eta", 3), false);
    if (id == "ParetoArchiveSearch") return std::make_unique<ParetoArchiveSearch>(task, seed);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(id + ": bad parameter: " + e.what());
  }
  throw SpecError("unknown optimizer '" + id + "'");
}

}  // namespace bbkit
