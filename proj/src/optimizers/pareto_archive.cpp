#include <algorithm>
#include <cmath>

#include "bbkit/optimizers.hpp"

namespace bbkit {

Configuration mo_archive_select(const ConfigSpace& space, Rng& rng,
                                const std::vector<ArchiveEntry>& archive) {
  if (archive.empty()) return sample_config(space, rng);
  std::vector<std::vector<double>> pts;
  pts.reserve(archive.size());
  for (const auto& e : archive) pts.push_back(e.objectives);
  const auto front = pareto_front(pts);
  std::uniform_int_distribution<std::size_t> pick(0, front.size() - 1);
  const Configuration& parent = archive[front[pick(rng)]].config;

  std::normal_distribution<double> gauss(0.0, 0.1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Configuration child;
  for (const auto& def : space.params()) {
    const ParamValue& v = parent.values.at(def.name);
    if (def.kind == ParamKind::Categorical) {
      if (coin(rng) < 0.2) {
        std::uniform_int_distribution<std::size_t> c(0, def.choices.size() - 1);
        child.values[def.name] = def.choices[c(rng)];
      } else {
        child.values[def.name] = v;
      }
    } else {
      const double u = std::clamp(encode_unit(def, v) + gauss(rng), 0.0, 1.0);
      child.values[def.name] = decode_unit(def, u);
    }
  }
  return child;
}

TrialInfo ParetoArchiveSearch::propose() {
  TrialInfo info;
  info.config = mo_archive_select(task_.config_space, rng_, archive_);
  info.budget = full_budget();
  return info;
}

void ParetoArchiveSearch::observe(const TrialInfo& info, const TrialValue& value) {
  if (!value.ok() || value.objectives.size() != task_.n_objectives) return;
  if (!std::all_of(value.objectives.begin(), value.objectives.end(),
                   [](double v) { return std::isfinite(v); }))
    return;
  archive_.push_back({info.config, value.objectives});
}

}  // namespace bbkit
