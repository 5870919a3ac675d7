#pragma once

// JSON forms of the core types. Non-finite reals are written as the strings
// "nan", "inf" and "-inf"; every other real uses shortest round-trip digits.

#include <json.hpp>

#include "bbkit/core.hpp"

namespace bbkit {

using Json = nlohmann::json;

Json real_to_json(double v);
double real_from_json(const Json& j);

Json to_json(const HyperparameterDef& def);
HyperparameterDef hyperparameter_from_json(const Json& j);

Json to_json(const ConfigSpace& space);
ConfigSpace config_space_from_json(const Json& j);

Json to_json(const Configuration& config);
Configuration configuration_from_json(const Json& j);

Json to_json(const TrialInfo& info);
TrialInfo trial_info_from_json(const Json& j);

Json to_json(const TrialValue& value);
TrialValue trial_value_from_json(const Json& j);

}  // namespace bbkit
