// Acceptance checks, one per criterion: `acceptance N` prints a single
// "criterion N: PASS|FAIL ..." line and exits non-zero on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "bbkit/analysis.hpp"
#include "bbkit/cli.hpp"
#include "bbkit/core.hpp"
#include "bbkit/discrepancy.hpp"
#include "bbkit/subselect.hpp"
#include "oracles.hpp"

using namespace bbkit;
namespace fs = std::filesystem;

namespace {

constexpr double kFig6Tolerance = 1e-4;
constexpr double kOracleTolerance = 2e-3;
constexpr int kLatticeSteps = 4096;
constexpr double kExactTolerance = 1e-12;
constexpr int kMicroHitsRequired = 18;
constexpr double kQualityMargin = 0.10;
constexpr double kPermutationTolerance = 0.02;
constexpr double kCdTolerance = 1e-4;
constexpr double kFriedmanPTolerance = 1e-4;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

PointSet uniform_points(std::uint64_t seed, std::size_t n, std::size_t d) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(n * d);
  for (double& x : xs) x = u(rng);
  return PointSet(d, std::move(xs));
}

// ---------------------------------------------------------------------------

Verdict c1() {
  const std::pair<int, int> golden[] = {{2, 77},   {3, 90},   {4, 100},  {5, 110},  {6, 118},
                                        {7, 126},  {8, 134},  {9, 140},  {10, 147}, {13, 165},
                                        {14, 170}, {16, 180}, {30, 240}, {32, 247}, {38, 267}};
  for (auto [d, n] : golden)
    if (budget_formula(d) != n)
      return {false, "d=" + std::to_string(d) + " gives " + std::to_string(budget_formula(d))};
  return {true, "15/15 budget pairs"};
}

Verdict c2() {
  // 60 points, 7 of them inside the box [0, 0.4)^2 of volume 0.16.
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 7; ++i) pts.push_back({0.05 * (i + 1), 0.05 * (7 - i)});
  for (int i = 0; i < 53; ++i) pts.push_back({0.41 + 0.011 * i, 0.5});
  const std::vector<double> q{0.4, 0.4};
  const double v = local_discrepancy(PointSet(pts), q).value();
  return {std::abs(v - 0.0433) < kFig6Tolerance, "local discrepancy " + fmt("%.6f", v)};
}

Verdict c3() {
  if (star_discrepancy_exact(PointSet(oracle::Points{{0.25}, {0.75}})).value != 0.25)
    return {false, "{0.25, 0.75} is not 0.25"};
  if (star_discrepancy_exact(PointSet(oracle::Points{{0.5, 0.5}})).value != 0.75)
    return {false, "{(0.5, 0.5)} is not 0.75"};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> n_dist(1, 12), d_dist(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_lattice = 0.0, worst_naive = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = n_dist(rng), d = d_dist(rng);
    oracle::Points pts(n, std::vector<double>(d));
    for (auto& p : pts)
      for (double& c : p) c = rep % 4 == 0 ? std::floor(u(rng) * 8) / 8 : u(rng);
    const double exact = star_discrepancy_exact(PointSet(pts)).value;
    const double lattice = oracle::lattice_discrepancy(pts, kLatticeSteps);
    if (exact < lattice - kExactTolerance)
      return {false, "set " + std::to_string(rep) + " below the lattice bound"};
    worst_lattice = std::max(worst_lattice, exact - lattice);
    worst_naive = std::max(worst_naive, std::abs(exact - oracle::star_discrepancy_naive(pts)));
  }
  return {worst_lattice < kOracleTolerance && worst_naive < kExactTolerance,
          "200 sets, max gap to dense grid " + fmt("%.2e", worst_lattice) + ", to naive corners " +
              fmt("%.1e", worst_naive)};
}

Verdict c4() {
  const PointSet p = uniform_points(1401, 14, 2);
  double best = 2.0;
  for (std::size_t a = 0; a < 14; ++a)
    for (std::size_t b = a + 1; b < 14; ++b)
      for (std::size_t c = b + 1; c < 14; ++c)
        for (std::size_t d = c + 1; d < 14; ++d) {
          const std::vector<std::size_t> s{a, b, c, d};
          best = std::min(best, star_discrepancy_exact(p.subset(s)).value);
        }
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SwapOptions opt;
    opt.brute = true;
    const SwapResult r = multi_restart(p, 4, 200, seed, opt);
    hits += std::abs(r.discrepancy - best) <= kExactTolerance;
  }
  return {hits >= kMicroHitsRequired,
          std::to_string(hits) + "/20 seeds reach the optimum " + fmt("%.6f", best)};
}

Verdict c5() {
  const PointSet p = uniform_points(5, 300, 3);
  const SwapResult r = multi_restart(p, 20, 8, 5, {}, 8);
  std::mt19937_64 rng(55);
  double mean = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::size_t> idx(300);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(20);
    mean += star_discrepancy_exact(p.subset(idx)).value / 50;
  }
  const double gain = 1.0 - r.discrepancy / mean;
  return {gain >= kQualityMargin, "selected " + fmt("%.4f", r.discrepancy) + " vs random mean " +
                                      fmt("%.4f", mean) + " (" + fmt("%.1f", 100 * gain) +
                                      "% better)"};
}

Verdict c6() {
  // Two interleaved copies of the centred 20-point grid: k=20 hands one exact
  // copy to each side (0.025 each); any 10 points have discrepancy >= 0.05.
  std::vector<std::vector<double>> pts;
  for (int copy = 0; copy < 2; ++copy)
    for (int i = 0; i < 20; ++i) pts.push_back({(i + 0.5) / 20.0});
  const PointSet p(pts);
  const KSweep sweep = k_sweep(p, default_k_candidates(p.size()), 10, 6);
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& s = sweep.rows[i].selection;
    std::vector<std::size_t> all(s.dev);
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    if (s.dev.size() != sweep.rows[i].k || s.test.size() != sweep.rows[i].k ||
        std::adjacent_find(all.begin(), all.end()) != all.end())
      return {false, "k=" + std::to_string(sweep.rows[i].k) + " subsets overlap or differ in size"};
    if (sweep.rows[i].sum() < sweep.rows[argmin].sum()) argmin = i;
  }
  const auto& chosen = sweep.rows[sweep.chosen];
  const bool pass = sweep.chosen == argmin && chosen.k == 20 &&
                    std::abs(chosen.sum() - 0.05) < kExactTolerance;
  return {pass, "chosen k=" + std::to_string(chosen.k) + " with d_dev+d_test " +
                    fmt("%.4f", chosen.sum())};
}

PerformanceMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
  PerformanceMatrix m;
  for (std::size_t i = 0; i < rows.size(); ++i) m.tasks.push_back("t" + std::to_string(i));
  for (std::size_t j = 0; j < rows.front().size(); ++j) m.optimizers.push_back("o" + std::to_string(j));
  m.values = rows;
  return m;
}

Verdict c7() {
  std::vector<std::string> failures;
  const auto f = friedman_test(matrix_of({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}));
  if (std::abs(f.statistic - 6.0) > 1e-12 || std::abs(f.p_value - 0.0498) > kFriedmanPTolerance)
    failures.push_back("consistent-ordering example gives " + fmt("%.4f", f.statistic));

  const double cd = nemenyi_cd(3, 20);
  if (std::abs(cd - 2.343 * std::sqrt(0.1)) > kCdTolerance)
    failures.push_back("CD(3,20) = " + fmt("%.5f", cd));

  std::mt19937_64 rng(77);
  double max_dev = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rep % 3;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row{1, 2, 3};
      std::shuffle(row.begin(), row.end(), rng);
      rows.push_back(row);
    }
    const PerformanceMatrix m = matrix_of(rows);
    for (const auto& r : rank_rows(m))
      if (std::accumulate(r.begin(), r.end(), 0.0) != 6.0) failures.push_back("rank sum != 6");
    max_dev = std::max(max_dev, std::abs(friedman_test(m).p_value -
                                         oracle::friedman_permutation_p(rank_rows(m))));
  }
  if (max_dev > kPermutationTolerance)
    failures.push_back("chi-squared p vs exact permutation p differ by up to " +
                       fmt("%.3f", max_dev));
  if (failures.empty()) return {true, "Friedman example, CD, permutation agreement, rank sums"};
  std::string msg;
  for (const auto& s : failures) msg += (msg.empty() ? "" : "; ") + s;
  return {false, msg};
}

// ---------------------------------------------------------------------------
// Desk pipeline

int cli(std::vector<std::string> args, std::string* captured = nullptr) {
  args.insert(args.begin(), "bbkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (captured) *captured = out.str();
  if (code != 0) std::cerr << err.str();
  return code;
}

/// Runs run -> subselect -> analyze into `root`; returns an error message or "".
std::string desk_pipeline(const fs::path& root, std::size_t workers) {
  const std::string plan = std::string(BBKIT_SOURCE_DIR) + "/configs/desk_plan.json";
  const std::string w = std::to_string(workers);
  if (cli({"--seed", "0", "run", "--plan", plan, "--out", (root / "runs").string(), "--workers", w}))
    return "run failed";
  if (cli({"--seed", "0", "subselect", "--records", (root / "runs").string(), "--out",
           (root / "subset").string(), "--workers", w}))
    return "subselect failed";
  if (cli({"analyze", "--records", (root / "runs").string(), "--out", (root / "reports").string(),
           "--subsets", (root / "subset" / "subset.json").string()}))
    return "analyze failed";
  return "";
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(oracle::read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

Verdict c8() {
  oracle::TempDir dir("acceptance-c8");
  const auto t0 = std::chrono::steady_clock::now();
  const std::string err = desk_pipeline(dir.path(), 8);
  if (!err.empty()) return {false, err};
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::vector<fs::path> artifacts{
      "runs/tasks.json",         "subset/subset.json",     "subset/dev_tasks.csv",
      "subset/test_tasks.csv",   "reports/ranks.csv",      "reports/friedman.json",
      "reports/cd.json",         "reports/rank_over_time.csv", "reports/heatmap.csv",
      "reports/ranking_validation.csv"};
  for (const auto& a : artifacts)
    if (!fs::exists(dir.path() / a)) return {false, "missing " + a.string()};
  const auto records = load_records(dir.path() / "runs");
  if (records.size() != 900) return {false, std::to_string(records.size()) + " records, want 900"};

  const auto validation = read_csv(dir.path() / "reports/ranking_validation.csv");
  std::string verdict;
  for (const auto& row : validation)
    if (row.size() > 10 && row[0] == "BB") verdict = row[10];
  if (verdict != "true" && verdict != "false") return {false, "no BB ranking-validation verdict"};

  double rs = 0.0, worst_other = -1.0;
  bool seen = false;
  for (const auto& row : read_csv(dir.path() / "reports/ranks.csv")) {
    if (row.size() < 4 || row[0] != "BB" || row[1] != "dev") continue;
    const double m = std::stod(row[3]);
    if (row[2] == "RandomSearch") {
      rs = m;
      seen = true;
    } else {
      worst_other = std::max(worst_other, m);
    }
  }
  if (!seen) return {false, "RandomSearch missing from the BB dev ranking"};
  return {rs > worst_other, "BB dev mean rank RandomSearch " + fmt("%.2f", rs) +
                                " vs next worst " + fmt("%.2f", worst_other) + ", consistent=" +
                                verdict + ", " + fmt("%.1f", secs) + " s"};
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = oracle::read_file(e.path());
  return out;
}

Verdict c9() {
  oracle::TempDir a("acceptance-c9a"), b("acceptance-c9b"), c("acceptance-c9c");
  for (const auto& [dir, workers] : {std::pair{&a, 8}, std::pair{&b, 8}, std::pair{&c, 1}}) {
    const std::string err = desk_pipeline(dir->path(), static_cast<std::size_t>(workers));
    if (!err.empty()) return {false, err};
  }
  const auto ta = tree_contents(a.path());
  const auto tb = tree_contents(b.path());
  const auto tc = tree_contents(c.path());
  for (const auto* other : {&tb, &tc}) {
    if (other->size() != ta.size()) return {false, "file sets differ"};
    for (const auto& [name, content] : ta) {
      const auto it = other->find(name);
      if (it == other->end() || it->second != content) return {false, name + " differs"};
    }
  }
  return {true, std::to_string(ta.size()) + " files identical across reruns and 1 vs 8 workers"};
}

// ---------------------------------------------------------------------------
// Property suites

Verdict c10() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Trajectory monotonicity.
  for (int rep = 0; rep < 200; ++rep) {
    RunRecord r;
    r.n_trials = 30;
    for (int i = 0; i < 30; ++i) {
      Trial t;
      t.value.objectives = {u(rng)};
      if (u(rng) < 0.2) t.value.status = TrialStatus::Failed;
      r.history.entries.push_back(t);
    }
    r.trajectory = update_incumbent(r.history, r.policy());
    double prev = INFINITY;
    for (std::size_t s = 1; s <= 30; ++s) {
      const double v = run_performance(r, s);
      if (v > prev) return {false, "incumbent value increased"};
      prev = v;
    }
  }

  // Pareto idempotence and hypervolume monotonicity.
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t o = 2 + rep % 2;
    std::vector<std::vector<double>> pts(12, std::vector<double>(o));
    for (auto& p : pts)
      for (double& c : p) c = std::floor(u(rng) * 6) / 5;
    const auto front_idx = pareto_front(pts);
    std::vector<std::vector<double>> front;
    for (std::size_t i : front_idx) front.push_back(pts[i]);
    if (pareto_front(front).size() != front.size()) return {false, "Pareto front not idempotent"};
    const std::vector<double> ref(o, 1.2);
    std::vector<std::vector<double>> grow;
    double prev = 0.0;
    for (const auto& p : pts) {
      grow.push_back(p);
      const double hv = hypervolume(grow, ref).value;
      if (hv < prev - 1e-15) return {false, "hypervolume decreased"};
      prev = hv;
    }
  }

  // Swap-heuristic strict improvement and brute local optimality (n <= 30).
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 20 + seed, k = 6;
    const PointSet p = uniform_points(seed, n, 2);
    Rng r(seed);
    const SwapResult res = swap_heuristic(p, k, r);
    double prev = res.initial;
    for (double v : res.accepted) {
      if (!(v < prev)) return {false, "accepted swap without strict improvement"};
      prev = v;
    }
    std::vector<char> in(n, 0);
    for (std::size_t i : res.subset) in[i] = 1;
    for (std::size_t slot = 0; slot < k; ++slot)
      for (std::size_t c = 0; c < n; ++c) {
        if (in[c]) continue;
        auto s = res.subset;
        s[slot] = c;
        if (star_discrepancy_exact(p.subset(s)).value < res.discrepancy)
          return {false, "brute result is not swap-locally optimal"};
      }
  }

  // Rank positions invariant under monotone transforms.
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::vector<double>> rows(10, std::vector<double>(4));
    for (auto& row : rows)
      for (double& x : row) x = std::floor(u(rng) * 5);
    PerformanceMatrix m = matrix_of(rows);
    PerformanceMatrix t = m;
    for (auto& row : t.values)
      for (double& x : row) x = std::log1p(x) * 3 + std::exp(x);
    const auto rm = mean_ranks(m), rt = mean_ranks(t);
    if (rank_positions(rm) != rank_positions(rt)) return {false, "rank positions changed"};
    const auto best = [](const std::vector<double>& v) {
      return std::min_element(v.begin(), v.end()) - v.begin();
    };
    if (best(rm) != best(rt)) return {false, "best optimizer changed"};
  }
  return {true, "trajectory, Pareto, hypervolume, swap and rank properties hold"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  std::vector<int> which;
  if (argc > 1) {
    which.push_back(std::atoi(argv[1]));
  } else {
    for (int i = 1; i <= 10; ++i) which.push_back(i);
  }
  int failed = 0;
  for (int c : which) {
    if (c < 1 || c > 10) {
      std::cerr << "usage: acceptance [1-10]\n";
      return 2;
    }
    Verdict v;
    try {
      v = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << c << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail << "\n";
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
