#include <doctest.h>

#include <cmath>
#include <random>

#include "bbkit/core.hpp"
#include "bbkit/errors.hpp"
#include "bbkit/serialize.hpp"
#include "oracles.hpp"

using namespace bbkit;

namespace {

Trial so_trial(double y, std::optional<double> budget = std::nullopt, bool ok = true) {
  Trial t;
  t.info.budget = budget;
  t.value.objectives = {y};
  t.value.status = ok ? TrialStatus::Ok : TrialStatus::Failed;
  return t;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) return false;
    strict |= a[j] < b[j];
  }
  return strict;
}

std::vector<std::size_t> front_oracle(const std::vector<std::vector<double>>& pts) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size(); ++j) dominated |= dominates(pts[j], pts[i]);
    if (!dominated) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("budget formula golden values") {
  const std::pair<int, int> golden[] = {{2, 77},   {3, 90},   {4, 100},  {5, 110},  {6, 118},
                                        {7, 126},  {8, 134},  {9, 140},  {10, 147}, {13, 165},
                                        {14, 170}, {16, 180}, {30, 240}, {32, 247}, {38, 267}};
  for (auto [d, n] : golden) CHECK(budget_formula(d) == n);
  CHECK(budget_formula(1) == 60);
  CHECK_THROWS_AS(budget_formula(0), SpecError);
  CHECK_THROWS_AS(budget_formula(-3), SpecError);
}

TEST_CASE("budget formula is non-decreasing and matches extended precision") {
  std::int64_t prev = 0;
  for (std::int64_t d = 1; d <= 10000; ++d) {
    const std::int64_t n = budget_formula(d);
    const long double ref = std::ceil(20.0L + 40.0L * std::sqrt(static_cast<long double>(d)));
    REQUIRE(n == static_cast<std::int64_t>(ref));
    REQUIRE(n >= prev);
    if (d <= 100) REQUIRE(n > prev);
    prev = n;
  }
}

TEST_CASE("hyperparameter definitions are validated") {
  CHECK_THROWS_AS(ConfigSpace({HyperparameterDef::make_float("x", 2, 1)}), SpecError);
  CHECK_THROWS_AS(ConfigSpace({HyperparameterDef::make_float("x", 0, 1, true)}), SpecError);
  CHECK_THROWS_AS(ConfigSpace({HyperparameterDef::make_categorical("c", {})}), SpecError);
  CHECK_THROWS_AS(ConfigSpace({HyperparameterDef::make_ordinal("o", {"a", "a"})}), SpecError);
  CHECK_THROWS_AS(ConfigSpace({HyperparameterDef::make_float("x", 0, 1),
                               HyperparameterDef::make_int("x", 0, 3)}),
                  SpecError);
  CHECK_NOTHROW(ConfigSpace({HyperparameterDef::make_float("x", 1, 1)}));
}

TEST_CASE("sample_config edge cases") {
  Rng rng(1);
  const ConfigSpace degenerate({HyperparameterDef::make_float("x", 1, 1)});
  for (int i = 0; i < 20; ++i)
    CHECK(std::get<double>(sample_config(degenerate, rng).values.at("x")) == 1.0);

  const ConfigSpace single({HyperparameterDef::make_categorical("c", {"only"})});
  CHECK(std::get<std::string>(sample_config(single, rng).values.at("c")) == "only");

  const ConfigSpace unit({HyperparameterDef::make_float("x", 0, 1)});
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += std::get<double>(sample_config(unit, rng).values.at("x"));
  CHECK(std::abs(sum / 10000 - 0.5) < 0.02);
}

TEST_CASE("log-scale floats sample uniformly in log space") {
  Rng rng(5);
  const ConfigSpace space({HyperparameterDef::make_float("lr", 1e-4, 1.0, true)});
  int below = 0;
  for (int i = 0; i < 4000; ++i) below += std::get<double>(sample_config(space, rng).values.at("lr")) < 1e-2;
  CHECK(std::abs(below / 4000.0 - 0.5) < 0.05);
}

TEST_CASE("sampled configurations always validate") {
  std::mt19937_64 gen(42);
  Rng rng(43);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int s = 0; s < 100000; ++s) {
    std::vector<HyperparameterDef> params;
    const int n = 1 + static_cast<int>(gen() % 4);
    for (int i = 0; i < n; ++i) {
      const std::string name = "p" + std::to_string(i);
      switch (gen() % 5) {
        case 0: {
          double a = u(gen), b = u(gen);
          if (a > b) std::swap(a, b);
          params.push_back(HyperparameterDef::make_float(name, a, b));
          break;
        }
        case 1: {
          const double a = 1e-3 + std::abs(u(gen));
          params.push_back(HyperparameterDef::make_float(name, a, a * (1 + gen() % 1000), true));
          break;
        }
        case 2: {
          const auto a = static_cast<std::int64_t>(u(gen));
          params.push_back(HyperparameterDef::make_int(name, a, a + static_cast<std::int64_t>(gen() % 50)));
          break;
        }
        case 3:
          params.push_back(HyperparameterDef::make_ordinal(name, {"lo", "mid", "hi"}));
          break;
        default:
          params.push_back(HyperparameterDef::make_categorical(name, {"a", "b"}));
      }
    }
    const ConfigSpace space(params);
    REQUIRE(validate_config(space, sample_config(space, rng)).empty());
  }
}

TEST_CASE("validate_config reports violations") {
  const ConfigSpace space({HyperparameterDef::make_float("x", 0, 1),
                           HyperparameterDef::make_categorical("c", {"a", "b"})});
  Configuration ok{{{"x", 0.5}, {"c", std::string("a")}}};
  CHECK(validate_config(space, ok).empty());

  Configuration out{{{"x", 1.5}, {"c", std::string("a")}}};
  auto v = validate_config(space, out);
  REQUIRE(v.size() == 1);
  CHECK(v[0].param == "x");
  CHECK(v[0].message == "out of bounds");

  Configuration missing{{{"c", std::string("b")}}};
  v = validate_config(space, missing);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message == "missing value");

  Configuration extra{{{"x", 0.5}, {"c", std::string("z")}, {"y", 1.0}}};
  v = validate_config(space, extra);
  CHECK(v.size() == 2);
}

TEST_CASE("unit encoding round trips") {
  const ConfigSpace space({HyperparameterDef::make_float("x", -2, 6),
                           HyperparameterDef::make_float("lr", 1e-3, 10, true),
                           HyperparameterDef::make_int("n", 1, 9),
                           HyperparameterDef::make_ordinal("o", {"s", "m", "l"}),
                           HyperparameterDef::make_categorical("c", {"p", "q", "r"})});
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const Configuration c = sample_config(space, rng);
    const auto u = encode_unit(space, c);
    for (double v : u) CHECK((v >= 0.0 && v <= 1.0));
    const Configuration back = decode_unit(space, u);
    CHECK(std::get<std::int64_t>(back.values.at("n")) == std::get<std::int64_t>(c.values.at("n")));
    CHECK(back.values.at("o") == c.values.at("o"));
    CHECK(back.values.at("c") == c.values.at("c"));
    CHECK(std::get<double>(back.values.at("x")) ==
          doctest::Approx(std::get<double>(c.values.at("x"))));
    CHECK(std::get<double>(back.values.at("lr")) ==
          doctest::Approx(std::get<double>(c.values.at("lr"))));
  }
}

TEST_CASE("config space JSON round trip") {
  const ConfigSpace space({HyperparameterDef::make_float("x", -2, 6),
                           HyperparameterDef::make_float("lr", 1e-3, 10, true),
                           HyperparameterDef::make_int("n", 1, 9),
                           HyperparameterDef::make_ordinal("o", {"s", "m", "l"}),
                           HyperparameterDef::make_categorical("c", {"p", "q"})});
  CHECK(config_space_from_json(Json::parse(to_json(space).dump())) == space);
  Rng rng(2);
  const Configuration c = sample_config(space, rng);
  CHECK(configuration_from_json(Json::parse(to_json(c).dump())) == c);
}

TEST_CASE("trial values keep non-finite objectives through JSON") {
  TrialValue v;
  v.objectives = {std::nan(""), INFINITY, -INFINITY, 0.1};
  v.status = TrialStatus::Failed;
  const TrialValue back = trial_value_from_json(Json::parse(to_json(v).dump()));
  CHECK(back == v);
  CHECK(std::isinf(back.objectives[1]));
}

TEST_CASE("task invariants") {
  struct Zero final : ObjectiveFunction {
    TrialValue evaluate(const TrialInfo&) const override { return {{0.0}, 1.0, TrialStatus::Ok}; }
  };
  const auto f = std::make_shared<Zero>();
  const ConfigSpace space({HyperparameterDef::make_float("x", 0, 1)});
  CHECK_THROWS_AS(Task::make("t", nullptr, TaskType::BB, space, 1), SpecError);
  CHECK_THROWS_AS(Task::make("", f, TaskType::BB, space, 1), SpecError);
  CHECK_THROWS_AS(Task::make("t", f, TaskType::BB, ConfigSpace{}, 1), SpecError);
  CHECK_THROWS_AS(Task::make("t", f, TaskType::MO, space, 1), SpecError);
  CHECK_THROWS_AS(Task::make("t", f, TaskType::MF, space, 1), SpecError);
  CHECK_THROWS_AS(Task::make("t", f, TaskType::BB, space, 2), SpecError);
  CHECK_THROWS_AS(Task::make("t", f, TaskType::MF, space, 1, FidelitySpace{"budget", 0, 27}),
                  SpecError);
  const Task t = Task::make("t", f, TaskType::MF, space, 1, FidelitySpace{"budget", 1, 27});
  CHECK(t.n_trials == 60);
  CHECK(t.fidelity->max_budget == 27);
  CHECK(!Task::make("t", f, TaskType::BB, space, 1, FidelitySpace{"budget", 1, 27}).fidelity);
}

TEST_CASE("pareto_front examples") {
  const std::vector<std::vector<double>> pts = {{0, 1}, {1, 0}, {1, 1}};
  CHECK(pareto_front(pts) == std::vector<std::size_t>{0, 1});
  const std::vector<std::vector<double>> one = {{3, 4}};
  CHECK(pareto_front(one) == std::vector<std::size_t>{0});
  const std::vector<std::vector<double>> dup = {{0, 1}, {0, 1}, {2, 2}};
  CHECK(pareto_front(dup) == std::vector<std::size_t>{0, 1});
  const std::vector<std::vector<double>> mixed = {{0, 1}, {1}};
  CHECK_THROWS_AS(pareto_front(mixed), SpecError);
}

TEST_CASE("pareto_front matches the pairwise dominance oracle and is idempotent") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::vector<double>> pts(50);
    for (auto& p : pts) p = {std::round(u(gen) * 20) / 20, std::round(u(gen) * 20) / 20};
    const auto front = pareto_front(pts);
    REQUIRE(front == front_oracle(pts));
    std::vector<std::vector<double>> sub;
    for (std::size_t i : front) sub.push_back(pts[i]);
    const auto again = pareto_front(sub);
    REQUIRE(again.size() == sub.size());
  }
}

TEST_CASE("single-objective trajectory") {
  History h;
  for (double y : {3.0, 2.0, 5.0, 1.0}) h.entries.push_back(so_trial(y));
  const Trajectory t = update_incumbent(h, IncumbentPolicy{1, std::nullopt});
  REQUIRE(t.entries.size() == 3);
  CHECK(t.entries[0].step == 1);
  CHECK(t.entries[1].step == 2);
  CHECK(t.entries[2].step == 4);
  // Incumbent values after steps 1..4 are 3, 2, 2, 1.
  const double expected[] = {3, 2, 2, 1};
  for (std::size_t s = 1; s <= 4; ++s)
    CHECK(h.entries[t.at_step(s)->incumbents[0]].value.objectives[0] == expected[s - 1]);
  CHECK(t.at_step(0) == nullptr);
}

TEST_CASE("full-fidelity trials take precedence") {
  History h;
  h.entries.push_back(so_trial(1.0, 3.0));
  h.entries.push_back(so_trial(9.0, 27.0));
  const Trajectory t = update_incumbent(h, IncumbentPolicy{1, 27.0});
  CHECK(h.entries[t.at_step(1)->incumbents[0]].value.objectives[0] == 1.0);
  CHECK(h.entries[t.at_step(2)->incumbents[0]].value.objectives[0] == 9.0);
}

TEST_CASE("failed trials never become incumbents") {
  History h;
  h.entries.push_back(so_trial(std::nan(""), std::nullopt, false));
  h.entries.push_back(so_trial(-5.0, std::nullopt, false));
  CHECK(update_incumbent(h, IncumbentPolicy{1, std::nullopt}).empty());
  h.entries.push_back(so_trial(2.0));
  const Trajectory t = update_incumbent(h, IncumbentPolicy{1, std::nullopt});
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entries[0].step == 3);
}

TEST_CASE("multi-objective incumbent equals the Pareto front of the history") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 20; ++rep) {
    History h;
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 10; ++i) {
      Trial t;
      t.value.objectives = {u(gen), u(gen)};
      pts.push_back(t.value.objectives);
      h.entries.push_back(t);
    }
    const Trajectory tr = update_incumbent(h, IncumbentPolicy{2, std::nullopt});
    auto inc = tr.entries.back().incumbents;
    std::sort(inc.begin(), inc.end());
    CHECK(inc == front_oracle(pts));
    for (const auto& e : tr.entries) {
      std::vector<std::vector<double>> f;
      for (std::size_t i : e.incumbents) f.push_back(pts[i]);
      CHECK(pareto_front(f).size() == f.size());
    }
  }
}

TEST_CASE("single-objective incumbent values never increase") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int rep = 0; rep < 500; ++rep) {
    History h;
    const int n = 1 + static_cast<int>(gen() % 40);
    for (int i = 0; i < n; ++i) h.entries.push_back(so_trial(u(gen), std::nullopt, gen() % 5 != 0));
    const Trajectory t = update_incumbent(h, IncumbentPolicy{1, std::nullopt});
    double prev = INFINITY;
    for (const auto& e : t.entries) {
      const double v = h.entries[e.incumbents[0]].value.objectives[0];
      REQUIRE(v < prev);
      prev = v;
    }
  }
}
