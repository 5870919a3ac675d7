#include <algorithm>
#include <cctype>
#include <set>

#include "bbkit/errors.hpp"
#include "bbkit/tasks.hpp"

namespace bbkit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

ConfigSpace box_space(Family family, std::size_t d) {
  const Box box = family_box(family);
  std::vector<HyperparameterDef> params;
  params.reserve(d);
  for (std::size_t i = 0; i < d; ++i)
    params.push_back(HyperparameterDef::make_float("x" + std::to_string(i), box.lower, box.upper));
  return ConfigSpace(std::move(params));
}

}  // namespace

TaskSet make_task_set(const TaskSetSpec& spec) {
  TaskSet tasks;
  std::set<std::string> ids;
  for (const auto& e : spec.entries) {
    if (!family_supports(e.family, e.task_type))
      throw SpecError(std::string(to_string(e.family)) + " cannot be used as a " +
                      std::string(to_string(e.task_type)) + " task");
    if (is_multi_fidelity(e.task_type) &&
        !(e.min_budget > 0.0 && e.min_budget < e.max_budget && e.bias_scale >= 0.0))
      throw SpecError("fidelity range must satisfy 0 < min_budget < max_budget, bias_scale >= 0");
    for (std::size_t d : e.dimensions) {
      if (d < family_min_dimension(e.family))
        throw SpecError(std::string(to_string(e.family)) + " needs dimension >= " +
                        std::to_string(family_min_dimension(e.family)));
      for (std::uint64_t inst : e.instances) {
        std::string id = lower(to_string(e.task_type)) + "/" + std::string(to_string(e.family)) +
                         "/" + std::to_string(d) + "/" + std::to_string(inst);
        if (!ids.insert(id).second) throw SpecError("duplicate task id " + id);
        ConfigSpace space = box_space(e.family, d);
        std::optional<FidelityModel> model;
        std::optional<FidelitySpace> fidelity;
        if (is_multi_fidelity(e.task_type)) {
          model = FidelityModel{e.min_budget, e.max_budget, e.bias_scale, hash_id(id)};
          fidelity = FidelitySpace{"budget", e.min_budget, e.max_budget};
        }
        auto objective = std::make_shared<SyntheticObjective>(e.family, space, inst, model);
        tasks.push_back(Task::make(std::move(id), std::move(objective), e.task_type,
                                   std::move(space), family_objectives(e.family), fidelity,
                                   std::to_string(inst)));
      }
    }
  }
  return tasks;
}

TaskSetSpec task_set_spec_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    if (!j.contains("tasks")) throw ParseError("task-set spec needs a 'tasks' array");
    list = &j["tasks"];
  }
  if (!list->is_array()) throw ParseError("task-set spec 'tasks' must be an array");
  TaskSetSpec spec;
  try {
    for (const auto& item : *list) {
      TaskSetEntry e;
      e.family = parse_family(item.at("family").get<std::string>());
      const Json& dims = item.at("dimensions");
      if (dims.is_array()) {
        e.dimensions = dims.get<std::vector<std::size_t>>();
      } else {
        e.dimensions = {dims.get<std::size_t>()};
      }
      const Json& inst = item.contains("instances") ? item["instances"] : Json::array({0});
      if (inst.is_array()) {
        e.instances = inst.get<std::vector<std::uint64_t>>();
      } else {
        e.instances = {inst.get<std::uint64_t>()};
      }
      e.task_type = parse_task_type(item.value("task_type", std::string("BB")));
      if (item.contains("fidelity")) {
        const Json& f = item["fidelity"];
        e.min_budget = f.value("min_budget", e.min_budget);
        e.max_budget = f.value("max_budget", e.max_budget);
        e.bias_scale = f.value("bias_scale", e.bias_scale);
      }
      spec.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("task-set spec: ") + e.what());
  }
  return spec;
}

Json to_json(const TaskSetSpec& spec) {
  Json tasks = Json::array();
  for (const auto& e : spec.entries) {
    Json item = {{"family", to_string(e.family)},
                 {"dimensions", e.dimensions},
                 {"instances", e.instances},
                 {"task_type", to_string(e.task_type)}};
    if (is_multi_fidelity(e.task_type))
      item["fidelity"] = {{"min_budget", e.min_budget},
                          {"max_budget", e.max_budget},
                          {"bias_scale", e.bias_scale}};
    tasks.push_back(std::move(item));
  }
  return {{"format_version", 1}, {"tasks", tasks}};
}

Json task_to_json(const Task& task) {
  Json j = {{"id", task.id},
            {"task_type", to_string(task.task_type)},
            {"config_space", to_json(task.config_space)},
            {"n_objectives", task.n_objectives},
            {"n_trials", task.n_trials}};
  if (task.fidelity)
    j["fidelity"] = {{"name", task.fidelity->name},
                     {"min_budget", task.fidelity->min_budget},
                     {"max_budget", task.fidelity->max_budget}};
  if (task.instance) j["instance"] = *task.instance;
  return j;
}

}  // namespace bbkit
