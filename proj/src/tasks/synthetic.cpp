#include <cmath>
#include <numbers>

#include "bbkit/errors.hpp"
#include "bbkit/tasks.hpp"

namespace bbkit {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Sphere: return "sphere";
    case Family::Rosenbrock: return "rosenbrock";
    case Family::Rastrigin: return "rastrigin";
    case Family::Ackley: return "ackley";
    case Family::Zdt1: return "zdt1";
    case Family::Dtlz2: return "dtlz2";
  }
  return "sphere";
}

Family parse_family(std::string_view text) {
  for (Family f : {Family::Sphere, Family::Rosenbrock, Family::Rastrigin, Family::Ackley,
                   Family::Zdt1, Family::Dtlz2})
    if (to_string(f) == text) return f;
  throw SpecError("unknown synthetic family '" + std::string(text) + "'");
}

Box family_box(Family family) {
  switch (family) {
    case Family::Rosenbrock: return {-5.0, 10.0};
    case Family::Zdt1:
    case Family::Dtlz2: return {0.0, 1.0};
    default: return {-5.0, 5.0};
  }
}

std::size_t family_objectives(Family family) {
  switch (family) {
    case Family::Zdt1: return 2;
    case Family::Dtlz2: return 3;
    default: return 1;
  }
}

std::size_t family_min_dimension(Family family) {
  switch (family) {
    case Family::Rosenbrock:
    case Family::Zdt1: return 2;
    case Family::Dtlz2: return 3;
    default: return 1;
  }
}

bool family_supports(Family family, TaskType type) {
  return (family_objectives(family) > 1) == is_multi_objective(type);
}

std::vector<double> instance_offset(Family family, std::size_t dimension, std::uint64_t instance) {
  std::vector<double> offset(dimension, 0.0);
  if (instance == 0) return offset;
  Rng rng(derive_seed(hash_id(to_string(family)), instance));
  const Box box = family_box(family);
  const double w = box.upper - box.lower;
  switch (family) {
    case Family::Zdt1: {
      std::uniform_real_distribution<double> u(0.0, 0.2);
      for (std::size_t i = 1; i < dimension; ++i) offset[i] = u(rng);
      break;
    }
    case Family::Dtlz2: {
      std::uniform_real_distribution<double> u(-0.1, 0.1);
      for (std::size_t i = 2; i < dimension; ++i) offset[i] = u(rng);
      break;
    }
    default: {
      std::uniform_real_distribution<double> u(-0.1 * w, 0.1 * w);
      for (auto& o : offset) o = u(rng);
      break;
    }
  }
  return offset;
}

namespace {

constexpr double kPi = std::numbers::pi;

double sphere(std::span<const double> z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return s;
}

double rosenbrock(std::span<const double> z) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const double a = z[i + 1] - z[i] * z[i];
    const double b = 1.0 - z[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double rastrigin(std::span<const double> z) {
  double s = 10.0 * static_cast<double>(z.size());
  for (double v : z) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
  return s;
}

double ackley(std::span<const double> z) {
  const double d = static_cast<double>(z.size());
  double sq = 0.0, cs = 0.0;
  for (double v : z) {
    sq += v * v;
    cs += std::cos(2.0 * kPi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

std::vector<double> zdt1(std::span<const double> z) {
  const double f1 = z[0];
  double acc = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) acc += std::abs(z[i]);
  const double g = 1.0 + 9.0 * acc / static_cast<double>(z.size() - 1);
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

std::vector<double> dtlz2(std::span<const double> z) {
  double g = 0.0;
  for (std::size_t i = 2; i < z.size(); ++i) g += (z[i] - 0.5) * (z[i] - 0.5);
  const double a = 0.5 * kPi * z[0];
  const double b = 0.5 * kPi * z[1];
  return {(1.0 + g) * std::cos(a) * std::cos(b), (1.0 + g) * std::cos(a) * std::sin(b),
          (1.0 + g) * std::sin(a)};
}

}  // namespace

std::vector<double> evaluate_synthetic(Family family, std::span<const double> x,
                                       std::uint64_t instance) {
  if (x.size() < family_min_dimension(family))
    throw DomainError(std::string(to_string(family)) + " needs dimension >= " +
                      std::to_string(family_min_dimension(family)));
  const Box box = family_box(family);
  for (double v : x)
    if (!(v >= box.lower && v <= box.upper))
      throw DomainError(std::string(to_string(family)) + ": coordinate outside [" +
                        std::to_string(box.lower) + ", " + std::to_string(box.upper) + "]");
  const std::vector<double> offset = instance_offset(family, x.size(), instance);
  std::vector<double> z(x.begin(), x.end());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] -= offset[i];
  switch (family) {
    case Family::Sphere: return {sphere(z)};
    case Family::Rosenbrock: return {rosenbrock(z)};
    case Family::Rastrigin: return {rastrigin(z)};
    case Family::Ackley: return {ackley(z)};
    case Family::Zdt1: return zdt1(z);
    case Family::Dtlz2: return dtlz2(z);
  }
  return {};
}

std::vector<double> attach_fidelity(std::vector<double> full, std::span<const double> x,
                                    const FidelityModel& model, double fidelity) {
  if (!(fidelity >= model.min_budget && fidelity <= model.max_budget))
    throw DomainError("fidelity " + std::to_string(fidelity) + " outside [" +
                      std::to_string(model.min_budget) + ", " +
                      std::to_string(model.max_budget) + "]");
  if (fidelity == model.max_budget || model.bias_scale == 0.0) return full;
  const double span = model.max_budget - model.min_budget;
  const double weight = model.bias_scale * (1.0 - (fidelity - model.min_budget) / span);
  for (std::size_t j = 0; j < full.size(); ++j) {
    Rng rng(derive_seed(model.seed, j));
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    double arg = phase(rng);
    for (double v : x) arg += coef(rng) * v;
    full[j] += weight * std::sin(arg);
  }
  return full;
}

SyntheticObjective::SyntheticObjective(Family family, ConfigSpace space, std::uint64_t instance,
                                       std::optional<FidelityModel> fidelity)
    : family_(family), space_(std::move(space)), instance_(instance), fidelity_(fidelity) {}

TrialValue SyntheticObjective::evaluate(const TrialInfo& info) const {
  const std::vector<double> x = numeric_vector(space_, info.config);
  TrialValue value;
  value.objectives = evaluate_synthetic(family_, x, instance_);
  value.cost = 1.0;
  if (fidelity_) {
    const double f = info.budget.value_or(fidelity_->max_budget);
    value.objectives = attach_fidelity(std::move(value.objectives), x, *fidelity_, f);
    // Virtual cost proportional to the resource spent; keeps records reproducible.
    value.cost = f / fidelity_->max_budget;
  }
  return value;
}

}  // namespace bbkit
