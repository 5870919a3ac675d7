#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "bbkit/errors.hpp"
#include "bbkit/subselect.hpp"

namespace bbkit {

DiscrepancyResult subset_discrepancy(const PointSet& points, std::span<const std::size_t> subset,
                                     Measure measure, const ExactOptions& exact) {
  const PointSet s = points.subset(subset);
  return measure == Measure::Lebesgue ? star_discrepancy_exact(s, exact)
                                      : empirical_discrepancy(s, points, exact);
}

namespace {

class SwapSearch {
 public:
  SwapSearch(const PointSet& points, std::size_t k, Rng& rng, const SwapOptions& options)
      : p_(points), n_(points.size()), k_(k), opt_(options), selected_(n_, 0) {
    std::vector<std::size_t> all(n_);
    std::iota(all.begin(), all.end(), 0);
    // Partial Fisher-Yates: the first k slots become a uniform k-subset.
    for (std::size_t i = 0; i < k_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n_ - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    sel_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k_));
    std::sort(sel_.begin(), sel_.end());
    for (std::size_t i : sel_) selected_[i] = 1;

    const std::size_t d = p_.dimension();
    order_.resize(d);
    rank_.assign(d, std::vector<std::size_t>(n_));
    for (std::size_t j = 0; j < d; ++j) {
      order_[j].resize(n_);
      std::iota(order_[j].begin(), order_[j].end(), 0);
      std::stable_sort(order_[j].begin(), order_[j].end(),
                       [&](std::size_t a, std::size_t b) { return p_(a, j) < p_(b, j); });
      for (std::size_t r = 0; r < n_; ++r) rank_[j][order_[j][r]] = r;
    }
  }

  SwapResult run() {
    cur_ = evaluate(sel_);
    SwapResult out;
    out.initial = cur_.value;
    if (k_ < n_) {
      for (;;) {
        if (neighbour_phase(out)) continue;
        if (opt_.brute && brute_phase(out)) continue;
        break;
      }
    }
    out.subset = sel_;
    out.discrepancy = cur_.value;
    return out;
  }

 private:
  DiscrepancyResult evaluate(const std::vector<std::size_t>& s) const {
    return subset_discrepancy(p_, s, opt_.measure, opt_.exact);
  }

  // Replaces sel_[slot] by `in` if that strictly lowers the discrepancy.
  bool try_swap(std::size_t slot, std::size_t in, SwapResult& out) {
    std::vector<std::size_t> trial(sel_);
    trial[slot] = in;
    std::sort(trial.begin(), trial.end());
    DiscrepancyResult r = evaluate(trial);
    if (!(r.value < cur_.value)) return false;
    selected_[sel_[slot]] = 0;
    selected_[in] = 1;
    sel_ = std::move(trial);
    cur_ = std::move(r);
    out.accepted.push_back(cur_.value);
    return true;
  }

  // Unselected points nearest to `out` along dimension j, up to `window` per side,
  // ordered by distance (left first on ties).
  std::vector<std::size_t> neighbours(std::size_t j, std::size_t out) const {
    std::vector<std::size_t> left, right;
    const std::size_t r = rank_[j][out];
    for (std::size_t t = r; t-- > 0 && left.size() < opt_.window;)
      if (!selected_[order_[j][t]]) left.push_back(order_[j][t]);
    for (std::size_t t = r + 1; t < n_ && right.size() < opt_.window; ++t)
      if (!selected_[order_[j][t]]) right.push_back(order_[j][t]);
    std::vector<std::size_t> merged;
    std::size_t a = 0, b = 0;
    const double x = p_(out, j);
    while (a < left.size() || b < right.size()) {
      if (b == right.size() ||
          (a < left.size() && x - p_(left[a], j) <= p_(right[b], j) - x))
        merged.push_back(left[a++]);
      else
        merged.push_back(right[b++]);
    }
    return merged;
  }

  bool neighbour_phase(SwapResult& out) {
    const PointSet s = p_.subset(sel_);
    const WorstDimension first = worst_box_dimension(s, cur_.box);
    std::vector<WorstDimension> outgoing{first};
    for (std::size_t j = 0; j < cur_.box.defining_points.size(); ++j) {
      const auto& dp = cur_.box.defining_points[j];
      if (dp && !(j == first.dimension && *dp == first.point)) outgoing.push_back({j, *dp});
    }
    for (const auto& [dim, local] : outgoing) {
      const std::size_t out_point = sel_[local];
      for (std::size_t in : neighbours(dim, out_point))
        if (try_swap(local, in, out)) return true;
    }
    return false;
  }

  bool brute_phase(SwapResult& out) {
    for (std::size_t slot = 0; slot < k_; ++slot)
      for (std::size_t in = 0; in < n_; ++in)
        if (!selected_[in] && try_swap(slot, in, out)) return true;
    return false;
  }

  const PointSet& p_;
  std::size_t n_, k_;
  SwapOptions opt_;
  std::vector<char> selected_;
  std::vector<std::size_t> sel_;
  std::vector<std::vector<std::size_t>> order_, rank_;
  DiscrepancyResult cur_;
};

}  // namespace

SwapResult swap_heuristic(const PointSet& points, std::size_t k, Rng& rng, const SwapOptions& options) {
  if (k < 1 || k > points.size())
    throw SpecError("subset size k=" + std::to_string(k) + " must lie in [1, " +
                    std::to_string(points.size()) + "]");
  return SwapSearch(points, k, rng, options).run();
}

SwapResult multi_restart(const PointSet& points, std::size_t k, std::size_t restarts,
                         std::uint64_t seed, const SwapOptions& options, std::size_t workers) {
  if (restarts < 1) throw SpecError("multi_restart needs at least one restart");
  if (k < 1 || k > points.size())
    throw SpecError("subset size k=" + std::to_string(k) + " must lie in [1, " +
                    std::to_string(points.size()) + "]");
  std::vector<SwapResult> results(restarts);
  std::vector<std::exception_ptr> errors(restarts);
  const auto one = [&](std::size_t r) {
    try {
      Rng rng(derive_seed(seed, r));
      results[r] = swap_heuristic(points, k, rng, options);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(workers, 1, restarts);
  if (n_threads == 1) {
    for (std::size_t r = 0; r < restarts; ++r) one(r);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < restarts; r += n_threads) one(r);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (results[r].discrepancy < results[best].discrepancy) best = r;
  return std::move(results[best]);
}

}  // namespace bbkit
