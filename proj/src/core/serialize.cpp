#include "bbkit/serialize.hpp"

#include <cmath>
#include <limits>

#include "bbkit/errors.hpp"

namespace bbkit {

Json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError("expected a real number, got " + j.dump());
}

Json to_json(const HyperparameterDef& def) {
  Json j = {{"name", def.name}, {"kind", to_string(def.kind)}};
  if (def.kind == ParamKind::Int) {
    j["lower"] = static_cast<std::int64_t>(def.lower);
    j["upper"] = static_cast<std::int64_t>(def.upper);
  } else if (def.kind == ParamKind::Float) {
    j["lower"] = def.lower;
    j["upper"] = def.upper;
    if (def.log_scale) j["log"] = true;
  } else {
    j["choices"] = def.choices;
  }
  return j;
}

HyperparameterDef hyperparameter_from_json(const Json& j) {
  try {
    HyperparameterDef def;
    def.name = j.at("name").get<std::string>();
    def.kind = parse_param_kind(j.at("kind").get<std::string>());
    if (def.numeric()) {
      def.lower = j.at("lower").get<double>();
      def.upper = j.at("upper").get<double>();
      def.log_scale = j.value("log", false);
    } else {
      def.choices = j.at("choices").get<std::vector<std::string>>();
    }
    return def;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("hyperparameter: ") + e.what());
  }
}

Json to_json(const ConfigSpace& space) {
  Json params = Json::array();
  for (const auto& p : space.params()) params.push_back(to_json(p));
  return {{"params", params}};
}

ConfigSpace config_space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("params") || !j["params"].is_array())
    throw ParseError("configuration space needs a 'params' array");
  std::vector<HyperparameterDef> params;
  for (const auto& p : j["params"]) params.push_back(hyperparameter_from_json(p));
  return ConfigSpace(std::move(params));
}

Json to_json(const Configuration& config) {
  Json j = Json::object();
  for (const auto& [name, value] : config.values)
    std::visit([&](const auto& v) { j[name] = v; }, value);
  return j;
}

Configuration configuration_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("configuration must be an object");
  Configuration c;
  for (const auto& [name, v] : j.items()) {
    if (v.is_number_float()) {
      c.values[name] = v.get<double>();
    } else if (v.is_number_integer()) {
      c.values[name] = v.get<std::int64_t>();
    } else if (v.is_string()) {
      c.values[name] = v.get<std::string>();
    } else {
      throw ParseError("configuration value for '" + name + "' has unsupported type");
    }
  }
  return c;
}

Json to_json(const TrialInfo& info) {
  Json j = {{"config", to_json(info.config)}};
  if (info.budget) j["budget"] = real_to_json(*info.budget);
  if (info.instance) j["instance"] = *info.instance;
  if (info.seed) j["seed"] = *info.seed;
  if (info.name) j["name"] = *info.name;
  if (info.checkpoint) j["checkpoint"] = *info.checkpoint;
  return j;
}

TrialInfo trial_info_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("config")) throw ParseError("trial info needs a 'config'");
  try {
    TrialInfo info;
    info.config = configuration_from_json(j["config"]);
    if (j.contains("budget")) info.budget = real_from_json(j["budget"]);
    if (j.contains("instance")) info.instance = j["instance"].get<std::string>();
    if (j.contains("seed")) info.seed = j["seed"].get<std::int64_t>();
    if (j.contains("name")) info.name = j["name"].get<std::string>();
    if (j.contains("checkpoint")) info.checkpoint = j["checkpoint"].get<std::string>();
    return info;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("trial info: ") + e.what());
  }
}

Json to_json(const TrialValue& value) {
  Json objectives = Json::array();
  for (double v : value.objectives) objectives.push_back(real_to_json(v));
  return {{"objectives", objectives},
          {"cost", real_to_json(value.cost)},
          {"status", value.ok() ? "ok" : "failed"}};
}

TrialValue trial_value_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("objectives") || !j["objectives"].is_array())
    throw ParseError("trial value needs an 'objectives' array");
  TrialValue v;
  for (const auto& o : j["objectives"]) v.objectives.push_back(real_from_json(o));
  v.cost = j.contains("cost") ? real_from_json(j["cost"]) : 0.0;
  const std::string status = j.value("status", std::string("ok"));
  if (status == "ok") {
    v.status = TrialStatus::Ok;
  } else if (status == "failed") {
    v.status = TrialStatus::Failed;
  } else {
    throw ParseError("unknown trial status '" + status + "'");
  }
  return v;
}

}  // namespace bbkit
