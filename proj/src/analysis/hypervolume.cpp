#include <algorithm>
#include <cmath>

#include "bbkit/analysis.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

namespace {

using Point2 = std::pair<double, double>;

// Union of [p, ref] boxes in the plane: sweep by x, adding the strip below the
// lowest y seen so far.
double sweep_2d(std::vector<Point2> pts, double ref_x, double ref_y) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double floor_y = ref_y;
  for (const auto& [x, y] : pts) {
    if (y < floor_y) {
      area += (ref_x - x) * (floor_y - y);
      floor_y = y;
    }
  }
  return area;
}

}  // namespace

HypervolumeResult hypervolume(std::span<const std::vector<double>> front, std::span<const double> ref) {
  const std::size_t o = ref.size();
  if (o != 2 && o != 3) throw SpecError("hypervolume supports two or three objectives");
  HypervolumeResult r;
  std::vector<std::vector<double>> pts;
  pts.reserve(front.size());
  for (const auto& p : front) {
    if (p.size() != o) throw SpecError("front point and reference differ in dimension");
    std::vector<double> c(p);
    bool finite = true;
    for (std::size_t j = 0; j < o; ++j) {
      if (!std::isfinite(c[j])) finite = false;
      if (c[j] > ref[j]) {
        c[j] = ref[j];
        r.clipped = true;
      }
    }
    if (finite) pts.push_back(std::move(c));
  }
  if (pts.empty()) return r;

  if (o == 2) {
    std::vector<Point2> p2;
    for (const auto& p : pts) p2.emplace_back(p[0], p[1]);
    r.value = sweep_2d(std::move(p2), ref[0], ref[1]);
    return r;
  }

  // Slice along the third objective; each slab carries the 2-d hypervolume of
  // every point at or below it.
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  std::vector<Point2> active;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    active.emplace_back(pts[i][0], pts[i][1]);
    const double z_next = i + 1 < pts.size() ? pts[i + 1][2] : ref[2];
    const double depth = z_next - pts[i][2];
    if (depth > 0.0) r.value += depth * sweep_2d(active, ref[0], ref[1]);
  }
  return r;
}

}  // namespace bbkit
