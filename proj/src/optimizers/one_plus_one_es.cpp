#include <algorithm>
#include <cmath>

#include "bbkit/optimizers.hpp"

namespace bbkit {

namespace {
constexpr double kSuccessFactor = 1.5;
constexpr double kCategoricalResample = 0.2;
}  // namespace

OnePlusOneES::OnePlusOneES(const Task& task, std::uint64_t seed, double sigma0)
    : Optimizer(task, seed), sigma_(sigma0) {}

Configuration OnePlusOneES::mutate(const Configuration& parent) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Configuration child;
  for (const auto& def : task_.config_space.params()) {
    const ParamValue& v = parent.values.at(def.name);
    switch (def.kind) {
      case ParamKind::Float:
      case ParamKind::Int: {
        const double u = std::clamp(encode_unit(def, v) + sigma_ * gauss(rng_), 0.0, 1.0);
        child.values[def.name] = decode_unit(def, u);
        break;
      }
      case ParamKind::Ordinal: {
        const auto& choices = def.choices;
        auto idx = static_cast<std::ptrdiff_t>(
            std::find(choices.begin(), choices.end(), std::get<std::string>(v)) - choices.begin());
        if (coin(rng_) < 0.5) {
          idx += coin(rng_) < 0.5 ? -1 : 1;
          idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(choices.size()) - 1);
        }
        child.values[def.name] = choices[static_cast<std::size_t>(idx)];
        break;
      }
      case ParamKind::Categorical: {
        if (coin(rng_) < kCategoricalResample) {
          std::uniform_int_distribution<std::size_t> pick(0, def.choices.size() - 1);
          child.values[def.name] = def.choices[pick(rng_)];
        } else {
          child.values[def.name] = v;
        }
        break;
      }
    }
  }
  return child;
}

TrialInfo OnePlusOneES::propose() {
  TrialInfo info;
  info.config = parent_ ? mutate(*parent_) : sample();
  info.budget = full_budget();
  return info;
}

void OnePlusOneES::observe(const TrialInfo& info, const TrialValue& value) {
  const bool usable = value.ok() && !value.objectives.empty() && std::isfinite(value.objectives[0]);
  if (!parent_) {
    if (usable) {
      parent_ = info.config;
      parent_value_ = value.objectives[0];
    }
    return;
  }
  if (usable && value.objectives[0] < parent_value_) {
    parent_ = info.config;
    parent_value_ = value.objectives[0];
    sigma_ *= kSuccessFactor;
  } else {
    // Four failures undo one success: equilibrium at a 1/5 success rate.
    sigma_ *= std::pow(kSuccessFactor, -0.25);
  }
  sigma_ = std::clamp(sigma_, 1e-8, 1.0);
}

}  // namespace bbkit
