#include "hlri/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hlri {

double SearchRegion::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dimension(); ++i) s += width(i) * width(i);
  return std::sqrt(s);
}

double SearchRegion::min_width() const {
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dimension(); ++i) w = std::min(w, width(i));
  return w;
}

bool SearchRegion::covers_direction(std::span<const double> direction) const {
  // Feasible scale t > 0 with a_min <= t * d <= a_max, one slab per axis.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dimension(); ++i) {
    const double d = direction[i];
    if (d == 0.0) {
      if (a_min[i] > 0.0 || a_max[i] < 0.0) return false;
      continue;
    }
    double t1 = a_min[i] / d;
    double t2 = a_max[i] / d;
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  return hi > 0.0 && lo <= hi * (1.0 + 1e-12);
}

}  // namespace hlri
