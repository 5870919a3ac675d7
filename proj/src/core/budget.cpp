#include <cmath>

#include "bbkit/core.hpp"
#include "bbkit/errors.hpp"

namespace bbkit {

std::int64_t budget_formula(std::int64_t d) {
  if (d < 1) throw SpecError("dimension must be >= 1, got " + std::to_string(d));
  // ceil(40 sqrt(d)) is the smallest m with m^2 >= 1600 d; integer search keeps it exact.
  const std::int64_t target = 1600 * d;
  auto m = static_cast<std::int64_t>(std::sqrt(static_cast<double>(target)));
  while (m * m < target) ++m;
  while (m > 0 && (m - 1) * (m - 1) >= target) --m;
  return 20 + m;
}

}  // namespace bbkit
