#include "bbkit/core.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

namespace {

// a weakly dominates b and is strictly better somewhere.
bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

}  // namespace

std::vector<std::size_t> pareto_front(std::span<const std::vector<double>> points) {
  std::vector<std::size_t> front;
  if (points.empty()) return front;
  const std::size_t m = points.front().size();
  for (const auto& p : points)
    if (p.size() != m) throw SpecError("pareto_front: objective vectors differ in length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j)
      dominated = j != i && dominates(points[j], points[i]);
    if (!dominated) front.push_back(i);
  }
  return front;
}

}  // namespace bbkit
