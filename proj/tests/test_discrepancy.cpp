#include <doctest.h>

#include <cmath>
#include <random>

#include "bbkit/discrepancy.hpp"
#include "bbkit/errors.hpp"
#include "oracles.hpp"

using namespace bbkit;

namespace {

oracle::Points random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, bool coarse) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> tick(0, 8);
  oracle::Points pts(n, std::vector<double>(d));
  for (auto& p : pts)
    for (double& c : p) c = coarse ? tick(rng) / 8.0 : u(rng);  // coarse sets force ties
  return pts;
}

}  // namespace

TEST_CASE("analytic discrepancies") {
  const auto a = star_discrepancy_exact(PointSet(oracle::Points{{0.25}, {0.75}}));
  CHECK(a.value == 0.25);

  const auto b = star_discrepancy_exact(PointSet(oracle::Points{{0.5, 0.5}}));
  CHECK(b.value == 0.75);
  CHECK(b.box.side == BoxSide::ClosedExcess);
  CHECK(b.box.q == std::vector<double>{0.5, 0.5});
  REQUIRE(b.box.defining_points.size() == 2);
  CHECK(b.box.defining_points[0] == std::optional<std::size_t>{0});

  // Single point in one dimension: max(x, 1 - x).
  for (double x : {0.0, 0.1, 0.5, 0.9}) {
    const auto r = star_discrepancy_exact(PointSet(oracle::Points{{x}}));
    CHECK(std::abs(r.value - std::max(x, 1.0 - x)) < 1e-15);
  }
  // Centred 1-d grid {(2i-1)/(2n)} is optimal with 1/(2n).
  for (std::size_t n : {1u, 3u, 10u}) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 1; i <= n; ++i) pts.push_back({(2.0 * i - 1.0) / (2.0 * n)});
    CHECK(std::abs(star_discrepancy_exact(PointSet(pts)).value - 0.5 / n) < 1e-15);
  }
}

TEST_CASE("local discrepancy of a box holding 7 of 60 points") {
  const LocalTerms t = local_discrepancy(0.16, 7, 7, 60);
  CHECK(std::abs(t.value() - 0.0433) < 1e-4);

  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 7; ++i) pts.push_back({0.05 * (i + 1), 0.05});
  for (int i = 0; i < 53; ++i) pts.push_back({0.45 + 0.01 * i, 0.6});
  const PointSet p(pts);
  const std::vector<double> q{0.4, 0.4};
  CHECK(std::abs(local_discrepancy(p, q, BoxSide::OpenDeficit) - (0.16 - 7.0 / 60.0)) < 1e-15);
}

TEST_CASE("exact discrepancy agrees with the naive and lattice oracles on fuzzed sets") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> n_dist(1, 12), d_dist(1, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = n_dist(rng), d = d_dist(rng);
    const auto pts = random_points(rng, n, d, rep % 4 == 0);
    const PointSet p(pts);
    const auto exact = star_discrepancy_exact(p);
    CAPTURE(rep);
    CHECK(std::abs(exact.value - oracle::star_discrepancy_naive(pts)) < 1e-12);
    bool interior = true;
    for (const auto& q : pts)
      for (double c : q) interior &= c < 1.0;
    if (interior) {
      // Sides at 1 span the axis, so the lattice bound only holds inside [0,1)^d.
      const double lattice = oracle::lattice_discrepancy(pts, 4096);
      CHECK(exact.value >= lattice - 1e-12);
      CHECK(exact.value - lattice < 2e-3);
    }
    // The reported box attains the value.
    CHECK(std::abs(local_discrepancy(p, exact.box.q, exact.box.side) - exact.value) < 1e-12);
    CHECK(exact.box.value == exact.value);
  }
}

TEST_CASE("discrepancy is invariant under permutation and duplication") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    auto pts = random_points(rng, 9, 2, rep % 2 == 0);
    const double base = star_discrepancy_exact(PointSet(pts)).value;
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(star_discrepancy_exact(PointSet(pts)).value == doctest::Approx(base).epsilon(1e-14));
    auto doubled = pts;
    doubled.insert(doubled.end(), pts.begin(), pts.end());
    CHECK(star_discrepancy_exact(PointSet(doubled)).value ==
          doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("discrepancy bounds") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rep % 15, d = 1 + rep % 3;
    auto pts = random_points(rng, n, d, rep % 3 == 0);
    for (auto& p : pts)
      for (double& c : p) c = std::min(c, 0.96875);  // the lower bound needs [0,1)^d
    const double v = star_discrepancy_exact(PointSet(pts)).value;
    CHECK(v >= 0.5 / static_cast<double>(n) - 1e-15);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("sides at 1 span the whole axis") {
  // Min-max scaled data always touches 1; the full cube must still hold every point.
  const PointSet p({{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
  const std::vector<double> all{1.0, 1.0};
  CHECK(local_discrepancy(p, all).open_deficit == 0.0);
  CHECK(star_discrepancy_exact(p).value < 1.0);
  CHECK(std::abs(star_discrepancy_exact(p).value -
                 oracle::star_discrepancy_naive({{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}})) < 1e-15);
}

TEST_CASE("input validation and capacity") {
  CHECK_THROWS_AS(PointSet(oracle::Points{{1.2}}), DomainError);
  CHECK_THROWS_AS(PointSet(oracle::Points{{-0.1, 0.5}}), DomainError);
  CHECK_THROWS_AS(PointSet(oracle::Points{{0.1, 0.5}, {0.2}}), SpecError);
  CHECK_THROWS_AS(PointSet(std::vector<std::vector<double>>{}), SpecError);
  CHECK_THROWS_AS(PointSet(2, {0.1, 0.2, 0.3}), SpecError);
  const PointSet p({{0.1, 0.2}});
  CHECK_THROWS_AS(local_discrepancy(p, std::vector<double>{0.5}), SpecError);
  CHECK_THROWS_AS(local_discrepancy(p, std::vector<double>{0.5, 1.5}), DomainError);

  std::mt19937_64 rng(1);
  const PointSet big(random_points(rng, 200, 5, false));
  CHECK_THROWS_AS(star_discrepancy_exact(big), CapacityError);
  const PointSet small(random_points(rng, 20, 3, false));
  CHECK_THROWS_AS(star_discrepancy_exact(small, ExactOptions{1e3}), CapacityError);
  CHECK_NOTHROW(star_discrepancy_exact(small));
}

TEST_CASE("worst box dimension") {
  const PointSet p({{0.2, 0.9}, {0.6, 0.3}, {0.8, 0.7}});
  const auto r = star_discrepancy_exact(p);
  const WorstDimension w = worst_box_dimension(p, r.box);
  REQUIRE(r.box.defining_points[w.dimension]);
  CHECK(p(w.point, w.dimension) == r.box.q[w.dimension]);
  for (std::size_t j = 0; j < w.dimension; ++j) CHECK(!r.box.defining_points[j]);

  WorstBox whole;
  whole.q = {1.0, 1.0};
  whole.defining_points = {std::nullopt, std::nullopt};
  const PointSet gaps({{0.2, 0.5}, {0.7, 0.1}});
  const WorstDimension f = worst_box_dimension(gaps, whole);
  CHECK(f.dimension == 1);
  CHECK(f.point == 0);
}

TEST_CASE("defining points are recorded per dimension") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const auto pts = random_points(rng, 8, 3, rep % 2 == 0);
    const PointSet p(pts);
    const auto r = star_discrepancy_exact(p);
    for (std::size_t j = 0; j < 3; ++j) {
      if (r.box.q[j] == 1.0) {
        CHECK(!r.box.defining_points[j]);
      } else {
        REQUIRE(r.box.defining_points[j]);
        CHECK(p(*r.box.defining_points[j], j) == r.box.q[j]);
      }
    }
  }
}

TEST_CASE("empirical discrepancy") {
  const PointSet ref(oracle::Points{{0.25}, {0.75}});
  CHECK(empirical_discrepancy(ref, ref).value == 0.0);
  CHECK(empirical_discrepancy(PointSet(oracle::Points{{0.5}}), ref).value == 0.5);

  // Against a reference, dense in every box: close to the Lebesgue value.
  std::vector<std::vector<double>> grid;
  for (int i = 0; i < 400; ++i) grid.push_back({(i + 0.5) / 400.0});
  const PointSet s({{0.1}, {0.35}, {0.8}});
  CHECK(std::abs(empirical_discrepancy(s, PointSet(grid)).value -
                 star_discrepancy_exact(s).value) < 2e-3);
  CHECK_THROWS_AS(empirical_discrepancy(s, PointSet(oracle::Points{{0.1, 0.2}})), SpecError);
}
