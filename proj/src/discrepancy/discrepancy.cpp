#include "bbkit/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bbkit/errors.hpp"

namespace bbkit {

PointSet::PointSet(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw SpecError("point set must contain at least one point");
  d_ = points.front().size();
  if (d_ == 0) throw SpecError("points must have dimension >= 1");
  coords_.reserve(points.size() * d_);
  for (const auto& p : points) {
    if (p.size() != d_) throw SpecError("points differ in dimension");
    for (double c : p) {
      if (!(c >= 0.0 && c <= 1.0)) throw DomainError("point coordinate outside [0,1]");
      coords_.push_back(c);
    }
  }
}

PointSet::PointSet(std::size_t d, std::vector<double> row_major)
    : d_(d), coords_(std::move(row_major)) {
  if (d_ == 0) throw SpecError("points must have dimension >= 1");
  if (coords_.empty() || coords_.size() % d_ != 0)
    throw SpecError("row-major coordinates do not form whole points");
  for (double c : coords_)
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("point coordinate outside [0,1]");
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * d_);
  for (std::size_t i : indices) {
    const auto p = point(i);
    out.insert(out.end(), p.begin(), p.end());
  }
  return PointSet(d_, std::move(out));
}

CriticalGrid CriticalGrid::of(const PointSet& points) {
  CriticalGrid g;
  g.coords.resize(points.dimension());
  for (std::size_t j = 0; j < points.dimension(); ++j) {
    auto& c = g.coords[j];
    c.reserve(points.size() + 1);
    for (std::size_t i = 0; i < points.size(); ++i) c.push_back(points(i, j));
    c.push_back(1.0);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return g;
}

LocalTerms local_discrepancy(double volume, std::size_t open_count, std::size_t closed_count,
                             std::size_t n) {
  const double nn = static_cast<double>(n);
  return {volume - static_cast<double>(open_count) / nn,
          static_cast<double>(closed_count) / nn - volume};
}

LocalTerms local_discrepancy(const PointSet& points, std::span<const double> q) {
  if (q.size() != points.dimension()) throw SpecError("corner dimension mismatch");
  double volume = 1.0;
  for (double c : q) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("box corner outside the unit cube");
    volume *= c;
  }
  std::size_t open = 0, closed = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool in_open = true, in_closed = true;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double x = points(i, j);
      if (!(x < q[j] || q[j] == 1.0)) in_open = false;
      if (!(x <= q[j])) in_closed = false;
    }
    open += in_open;
    closed += in_closed;
  }
  return local_discrepancy(volume, open, closed, points.size());
}

double local_discrepancy(const PointSet& points, std::span<const double> q, BoxSide side) {
  const LocalTerms t = local_discrepancy(points, q);
  return side == BoxSide::OpenDeficit ? t.open_deficit : t.closed_excess;
}

namespace {

void check_capacity(std::size_t n, std::size_t d, const ExactOptions& options) {
  const double work = static_cast<double>(n) *
                      std::pow(static_cast<double>(n + 1), static_cast<double>(d - 1));
  if (work > options.max_work)
    throw CapacityError("exact discrepancy for n=" + std::to_string(n) + ", d=" +
                        std::to_string(d) +
                        " exceeds the work limit; use the subset-selection heuristic path");
}

std::vector<std::size_t> sorted_by_last(const PointSet& p) {
  const std::size_t last = p.dimension() - 1;
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return p(a, last) < p(b, last); });
  return idx;
}

std::vector<std::optional<std::size_t>> defining_points_of(const PointSet& p,
                                                           std::span<const double> q) {
  std::vector<std::optional<std::size_t>> out(q.size());
  for (std::size_t j = 0; j < q.size(); ++j)
    for (std::size_t i = 0; q[j] < 1.0 && i < p.size(); ++i)
      if (p(i, j) == q[j]) {
        out[j] = i;
        break;
      }
  return out;
}

// Grid sweep with per-depth filtered index lists. Outer dimensions walk the
// critical grid; the last dimension is a merge over the surviving points, which
// are kept ordered by their last coordinate.
class LebesgueSweep {
 public:
  explicit LebesgueSweep(const PointSet& p)
      : p_(p), d_(p.dimension()), n_(static_cast<double>(p.size())), grid_(CriticalGrid::of(p)),
        open_(d_), closed_(d_), q_(d_, 1.0) {}

  DiscrepancyResult run() {
    open_[0] = sorted_by_last(p_);
    closed_[0] = open_[0];
    best_.box.q.assign(d_, 1.0);
    best_.value = -1.0;
    recurse(0, 1.0);
    best_.box.value = best_.value;
    best_.box.defining_points = defining_points_of(p_, best_.box.q);
    return best_;
  }

 private:
  void recurse(std::size_t dim, double volume) {
    if (dim + 1 == d_) {
      sweep_last(volume);
      return;
    }
    auto& open_next = open_[dim + 1];
    auto& closed_next = closed_[dim + 1];
    for (double g : grid_.coords[dim]) {
      open_next.clear();
      closed_next.clear();
      for (std::size_t i : open_[dim])
        if (p_(i, dim) < g || g == 1.0) open_next.push_back(i);
      for (std::size_t i : closed_[dim])
        if (p_(i, dim) <= g) closed_next.push_back(i);
      q_[dim] = g;
      recurse(dim + 1, volume * g);
    }
  }

  void sweep_last(double volume) {
    const std::size_t last = d_ - 1;
    const auto& open = open_[last];
    const auto& closed = closed_[last];
    // The deficit grows until the next open point, except that at 1 every point
    // enters the box; the largest grid value below 1 must be scored as well.
    const auto& axis = grid_.coords[last];
    double top = axis.size() >= 2 ? axis[axis.size() - 2] : 1.0;
    std::size_t a = 0, b = 0;
    for (;;) {
      double g = top;
      if (a < open.size()) g = std::min(g, p_(open[a], last));
      if (b < closed.size()) g = std::min(g, p_(closed[b], last));
      while (a < open.size() && (p_(open[a], last) < g || g == 1.0)) ++a;
      while (b < closed.size() && p_(closed[b], last) <= g) ++b;
      const double v = volume * g;
      const double deficit = v - static_cast<double>(a) / n_;
      const double excess = static_cast<double>(b) / n_ - v;
      if (deficit > best_.value) record(g, deficit, BoxSide::OpenDeficit);
      if (excess > best_.value) record(g, excess, BoxSide::ClosedExcess);
      if (g >= 1.0) break;
      if (g == top) top = 1.0;
      while (a < open.size() && p_(open[a], last) <= g) ++a;
    }
  }

  void record(double g_last, double value, BoxSide side) {
    best_.value = value;
    best_.box.side = side;
    best_.box.q = q_;
    best_.box.q[d_ - 1] = g_last;
  }

  const PointSet& p_;
  std::size_t d_;
  double n_;
  CriticalGrid grid_;
  std::vector<std::vector<std::size_t>> open_, closed_;
  std::vector<double> q_;
  DiscrepancyResult best_;
};

}  // namespace

DiscrepancyResult star_discrepancy_exact(const PointSet& points, const ExactOptions& options) {
  if (points.size() == 0) throw SpecError("point set must contain at least one point");
  check_capacity(points.size(), points.dimension(), options);
  return LebesgueSweep(points).run();
}

DiscrepancyResult empirical_discrepancy(const PointSet& subset, const PointSet& reference,
                                        const ExactOptions& options) {
  if (subset.size() == 0 || reference.size() == 0)
    throw SpecError("point sets must contain at least one point");
  const std::size_t d = subset.dimension();
  if (reference.dimension() != d) throw SpecError("point sets differ in dimension");
  check_capacity(subset.size() + reference.size(), d, options);

  // Signed weights: subset points +1/|S|, reference points -1/|R|.
  struct Weighted {
    std::vector<double> x;
    double w;
  };
  std::vector<Weighted> pts;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto p = subset.point(i);
    pts.push_back({{p.begin(), p.end()}, 1.0 / static_cast<double>(subset.size())});
  }
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto p = reference.point(i);
    pts.push_back({{p.begin(), p.end()}, -1.0 / static_cast<double>(reference.size())});
  }
  std::vector<std::vector<double>> grid(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (const auto& p : pts) grid[j].push_back(p.x[j]);
    grid[j].push_back(1.0);
    std::sort(grid[j].begin(), grid[j].end());
    grid[j].erase(std::unique(grid[j].begin(), grid[j].end()), grid[j].end());
  }
  const std::size_t last = d - 1;
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x[last] < pts[b].x[last];
  });

  DiscrepancyResult best;
  best.value = -1.0;
  std::vector<double> q(d, 1.0);
  std::vector<std::vector<std::size_t>> lists(d);
  lists[0] = order;

  const auto sweep = [&](const std::vector<std::size_t>& live) {
    double sum = 0.0;
    std::size_t a = 0;
    for (double g : grid[last]) {
      while (a < live.size() && (pts[live[a]].x[last] < g || g == 1.0)) sum += pts[live[a++]].w;
      const double v = std::abs(sum);
      if (v > best.value + 1e-15) {
        best.value = v;
        best.box.q = q;
        best.box.q[last] = g;
        best.box.side = sum < 0.0 ? BoxSide::OpenDeficit : BoxSide::ClosedExcess;
      }
    }
  };
  const auto recurse = [&](auto& self, std::size_t dim) -> void {
    if (dim == last) {
      sweep(lists[dim]);
      return;
    }
    for (double g : grid[dim]) {
      lists[dim + 1].clear();
      for (std::size_t i : lists[dim])
        if (pts[i].x[dim] < g || g == 1.0) lists[dim + 1].push_back(i);
      q[dim] = g;
      self(self, dim + 1);
    }
  };
  recurse(recurse, 0);
  best.value = std::max(best.value, 0.0);
  best.box.value = best.value;
  best.box.defining_points = defining_points_of(subset, best.box.q);
  return best;
}

WorstDimension worst_box_dimension(const PointSet& points, const WorstBox& box) {
  for (std::size_t j = 0; j < box.defining_points.size(); ++j)
    if (box.defining_points[j]) return {j, *box.defining_points[j]};
  std::size_t best_dim = 0, best_point = 0;
  double best_gap = -1.0;
  for (std::size_t j = 0; j < points.dimension(); ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points(i, j) > points(arg, j)) arg = i;
    const double gap = 1.0 - points(arg, j);
    if (gap > best_gap) {
      best_gap = gap;
      best_dim = j;
      best_point = arg;
    }
  }
  return {best_dim, best_point};
}

}  // namespace bbkit
