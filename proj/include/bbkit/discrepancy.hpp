#pragma once

// Exact L-infinity star discrepancy of small point sets in [0,1]^d.
//
// For anchored boxes [0,q) the supremum of |count/n - volume| is attained on
// the critical grid (per-dimension point coordinates plus 1) when every grid
// corner is scored with both the open count |P in [0,q)| (volume deficit) and
// the closed count |P in [0,q]| (the limit of boxes shrinking onto q from above).
//
// A box side q_j = 1 spans the whole axis, so the box with every side at 1 holds
// every point, including points on the upper faces of the cube. Read literally,
// [0,1)^d excludes those points, and min-max scaled data (which always has a
// coordinate at 1) would give every subset discrepancy 1. For points in
// [0,1)^d both readings agree. For points on an upper face, the value is the
// maximum over the critical grid, and boxes approaching a face from below are
// not scored separately.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bbkit {

/// n points in [0,1]^d, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  /// Throws DomainError for coordinates outside [0,1], SpecError for ragged or empty input.
  explicit PointSet(const std::vector<std::vector<double>>& points);
  PointSet(std::size_t d, std::vector<double> row_major);

  std::size_t size() const { return d_ ? coords_.size() / d_ : 0; }
  std::size_t dimension() const { return d_; }
  double operator()(std::size_t i, std::size_t j) const { return coords_[i * d_ + j]; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * d_, d_}; }

  PointSet subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

/// Per-dimension sorted unique coordinates, each list closed by 1.
struct CriticalGrid {
  std::vector<std::vector<double>> coords;
  static CriticalGrid of(const PointSet& points);
};

enum class BoxSide { OpenDeficit, ClosedExcess };

struct WorstBox {
  std::vector<double> q;
  double value = 0.0;
  BoxSide side = BoxSide::OpenDeficit;
  /// Lowest-index point whose coordinate equals q[j] < 1; empty where q[j] = 1 is the cube boundary.
  std::vector<std::optional<std::size_t>> defining_points;
};

struct LocalTerms {
  double open_deficit;    // volume - open/n
  double closed_excess;   // closed/n - volume
  double value() const { return open_deficit > closed_excess ? open_deficit : closed_excess; }
};

/// Local discrepancy terms from a box volume and its point counts.
LocalTerms local_discrepancy(double volume, std::size_t open_count, std::size_t closed_count,
                             std::size_t n);
/// Local discrepancy of corner q (counts taken by scanning P, sides with q_j = 1
/// spanning the whole axis). Throws DomainError outside [0,1]^d.
LocalTerms local_discrepancy(const PointSet& points, std::span<const double> q);
double local_discrepancy(const PointSet& points, std::span<const double> q, BoxSide side);

struct DiscrepancyResult {
  double value = 0.0;
  WorstBox box;
};

struct ExactOptions {
  /// Upper bound on n (n+1)^(d-1), the grid-sweep work estimate.
  double max_work = 2e9;
};

/// Max over critical-grid corners of the local discrepancy. Ties keep the first
/// corner in sweep order (dimension 0 outermost, ascending coordinates, open side
/// before closed). Throws CapacityError past `max_work`.
DiscrepancyResult star_discrepancy_exact(const PointSet& points, const ExactOptions& options = {});

/// Discrepancy of `subset` measured against the empirical distribution of
/// `reference` instead of the Lebesgue measure: sup over q of
/// | |S in [0,q)|/|S| - |R in [0,q)|/|R| |, attained on the union grid. Defining
/// points index into `subset`.
DiscrepancyResult empirical_discrepancy(const PointSet& subset, const PointSet& reference,
                                        const ExactOptions& options = {});

struct WorstDimension {
  std::size_t dimension;
  std::size_t point;
};

/// Lowest dimension whose worst-box coordinate is defined by a point, with that
/// point. If only the boundary value 1 defines the box, falls back to the
/// dimension with the widest gap between its largest coordinate and 1 and the
/// point holding that largest coordinate.
WorstDimension worst_box_dimension(const PointSet& points, const WorstBox& box);

}  // namespace bbkit
