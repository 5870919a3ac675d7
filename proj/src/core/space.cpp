#include <algorithm>
#include <cmath>
#include <set>

#include "bbkit/core.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

std::string_view to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::Float: return "float";
    case ParamKind::Int: return "int";
    case ParamKind::Ordinal: return "ordinal";
    case ParamKind::Categorical: return "categorical";
  }
  return "float";
}

ParamKind parse_param_kind(std::string_view text) {
  if (text == "float") return ParamKind::Float;
  if (text == "int" || text == "integer") return ParamKind::Int;
  if (text == "ordinal") return ParamKind::Ordinal;
  if (text == "categorical") return ParamKind::Categorical;
  throw SpecError("unknown hyperparameter kind '" + std::string(text) + "'");
}

HyperparameterDef HyperparameterDef::make_float(std::string name, double lower, double upper,
                                                bool log_scale) {
  return {std::move(name), ParamKind::Float, lower, upper, log_scale, {}};
}

HyperparameterDef HyperparameterDef::make_int(std::string name, std::int64_t lower,
                                              std::int64_t upper) {
  return {std::move(name), ParamKind::Int, static_cast<double>(lower),
          static_cast<double>(upper), false, {}};
}

HyperparameterDef HyperparameterDef::make_ordinal(std::string name,
                                                  std::vector<std::string> choices) {
  return {std::move(name), ParamKind::Ordinal, 0.0, 1.0, false, std::move(choices)};
}

HyperparameterDef HyperparameterDef::make_categorical(std::string name,
                                                      std::vector<std::string> choices) {
  return {std::move(name), ParamKind::Categorical, 0.0, 1.0, false, std::move(choices)};
}

namespace {

void check_definition(const HyperparameterDef& def) {
  const auto fail = [&](const std::string& why) {
    throw SpecError("hyperparameter '" + def.name + "': " + why);
  };
  if (def.name.empty()) throw SpecError("hyperparameter with empty name");
  if (def.numeric()) {
    if (!std::isfinite(def.lower) || !std::isfinite(def.upper)) fail("bounds must be finite");
    // Degenerate intervals are allowed; they sample their single value.
    if (def.lower > def.upper) fail("lower bound exceeds upper bound");
    if (def.kind == ParamKind::Int &&
        (def.lower != std::floor(def.lower) || def.upper != std::floor(def.upper)))
      fail("integer bounds must be integral");
    if (def.log_scale && def.kind != ParamKind::Float) fail("log scale is float-only");
    if (def.log_scale && def.lower <= 0.0) fail("log scale requires lower > 0");
  } else {
    if (def.choices.empty()) fail("choices must be non-empty");
    std::set<std::string> seen(def.choices.begin(), def.choices.end());
    if (seen.size() != def.choices.size()) fail("duplicate choices");
  }
}

std::size_t choice_index(const HyperparameterDef& def, const std::string& value) {
  auto it = std::find(def.choices.begin(), def.choices.end(), value);
  if (it == def.choices.end()) throw DomainError("'" + value + "' is not a choice of " + def.name);
  return static_cast<std::size_t>(it - def.choices.begin());
}

}  // namespace

ConfigSpace::ConfigSpace(std::vector<HyperparameterDef> params) : params_(std::move(params)) {
  if (params_.empty()) throw SpecError("configuration space needs at least one parameter");
  std::set<std::string> names;
  for (const auto& p : params_) {
    check_definition(p);
    if (!names.insert(p.name).second) throw SpecError("duplicate parameter name '" + p.name + "'");
  }
}

const HyperparameterDef* ConfigSpace::find(std::string_view name) const {
  for (const auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<Violation> validate_config(const ConfigSpace& space, const Configuration& config) {
  std::vector<Violation> out;
  for (const auto& def : space.params()) {
    auto it = config.values.find(def.name);
    if (it == config.values.end()) {
      out.push_back({def.name, "missing value"});
      continue;
    }
    const ParamValue& v = it->second;
    switch (def.kind) {
      case ParamKind::Float: {
        const double* x = std::get_if<double>(&v);
        if (!x) {
          out.push_back({def.name, "wrong type"});
        } else if (!(*x >= def.lower && *x <= def.upper)) {
          out.push_back({def.name, "out of bounds"});
        }
        break;
      }
      case ParamKind::Int: {
        const std::int64_t* x = std::get_if<std::int64_t>(&v);
        if (!x) {
          out.push_back({def.name, "wrong type"});
        } else if (static_cast<double>(*x) < def.lower || static_cast<double>(*x) > def.upper) {
          out.push_back({def.name, "out of bounds"});
        }
        break;
      }
      case ParamKind::Ordinal:
      case ParamKind::Categorical: {
        const std::string* x = std::get_if<std::string>(&v);
        if (!x) {
          out.push_back({def.name, "wrong type"});
        } else if (std::find(def.choices.begin(), def.choices.end(), *x) == def.choices.end()) {
          out.push_back({def.name, "unknown choice"});
        }
        break;
      }
    }
  }
  for (const auto& [name, _] : config.values)
    if (!space.find(name)) out.push_back({name, "unknown parameter"});
  return out;
}

Configuration sample_config(const ConfigSpace& space, Rng& rng) {
  Configuration c;
  for (const auto& def : space.params()) {
    switch (def.kind) {
      case ParamKind::Float: {
        double x = def.lower;
        if (def.upper > def.lower) {
          if (def.log_scale) {
            std::uniform_real_distribution<double> u(std::log(def.lower), std::log(def.upper));
            x = std::clamp(std::exp(u(rng)), def.lower, def.upper);
          } else {
            std::uniform_real_distribution<double> u(def.lower, def.upper);
            x = u(rng);
          }
        }
        c.values[def.name] = x;
        break;
      }
      case ParamKind::Int: {
        std::uniform_int_distribution<std::int64_t> u(static_cast<std::int64_t>(def.lower),
                                                      static_cast<std::int64_t>(def.upper));
        c.values[def.name] = u(rng);
        break;
      }
      case ParamKind::Ordinal:
      case ParamKind::Categorical: {
        std::uniform_int_distribution<std::size_t> u(0, def.choices.size() - 1);
        c.values[def.name] = def.choices[u(rng)];
        break;
      }
    }
  }
  return c;
}

double encode_unit(const HyperparameterDef& def, const ParamValue& value) {
  switch (def.kind) {
    case ParamKind::Float: {
      const double x = std::get<double>(value);
      if (def.upper <= def.lower) return 0.5;
      if (def.log_scale)
        return (std::log(x) - std::log(def.lower)) / (std::log(def.upper) - std::log(def.lower));
      return (x - def.lower) / (def.upper - def.lower);
    }
    case ParamKind::Int: {
      const double x = static_cast<double>(std::get<std::int64_t>(value));
      if (def.upper <= def.lower) return 0.5;
      return (x - def.lower) / (def.upper - def.lower);
    }
    case ParamKind::Ordinal: {
      const std::size_t m = def.choices.size();
      if (m == 1) return 0.5;
      return static_cast<double>(choice_index(def, std::get<std::string>(value))) /
             static_cast<double>(m - 1);
    }
    case ParamKind::Categorical: {
      const std::size_t m = def.choices.size();
      return (static_cast<double>(choice_index(def, std::get<std::string>(value))) + 0.5) /
             static_cast<double>(m);
    }
  }
  return 0.5;
}

ParamValue decode_unit(const HyperparameterDef& def, double u) {
  u = std::clamp(std::isfinite(u) ? u : 0.5, 0.0, 1.0);
  switch (def.kind) {
    case ParamKind::Float: {
      if (def.upper <= def.lower) return def.lower;
      double x;
      if (def.log_scale) {
        x = std::exp(std::log(def.lower) + u * (std::log(def.upper) - std::log(def.lower)));
      } else {
        x = def.lower + u * (def.upper - def.lower);
      }
      return std::clamp(x, def.lower, def.upper);
    }
    case ParamKind::Int: {
      const double x = std::round(def.lower + u * (def.upper - def.lower));
      return static_cast<std::int64_t>(std::clamp(x, def.lower, def.upper));
    }
    case ParamKind::Ordinal: {
      const std::size_t m = def.choices.size();
      const auto idx = static_cast<std::size_t>(std::lround(u * static_cast<double>(m - 1)));
      return def.choices[std::min(idx, m - 1)];
    }
    case ParamKind::Categorical: {
      const std::size_t m = def.choices.size();
      const auto idx = static_cast<std::size_t>(u * static_cast<double>(m));
      return def.choices[std::min(idx, m - 1)];
    }
  }
  return def.lower;
}

std::vector<double> encode_unit(const ConfigSpace& space, const Configuration& config) {
  std::vector<double> u;
  u.reserve(space.dimension());
  for (const auto& def : space.params()) u.push_back(encode_unit(def, config.values.at(def.name)));
  return u;
}

Configuration decode_unit(const ConfigSpace& space, std::span<const double> u) {
  if (u.size() != space.dimension()) throw SpecError("unit vector has wrong dimension");
  Configuration c;
  for (std::size_t i = 0; i < u.size(); ++i)
    c.values[space.params()[i].name] = decode_unit(space.params()[i], u[i]);
  return c;
}

std::vector<double> numeric_vector(const ConfigSpace& space, const Configuration& config) {
  std::vector<double> x;
  x.reserve(space.dimension());
  for (const auto& def : space.params()) {
    auto it = config.values.find(def.name);
    if (it == config.values.end()) throw DomainError("missing value for " + def.name);
    if (const double* d = std::get_if<double>(&it->second)) {
      x.push_back(*d);
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&it->second)) {
      x.push_back(static_cast<double>(*i));
    } else {
      throw DomainError("parameter " + def.name + " is not numeric");
    }
  }
  return x;
}

}  // namespace bbkit
