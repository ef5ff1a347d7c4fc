#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hlri {

/// Direction box [a_min, a_max] plus the beta annulus [beta_min, beta_max].
/// Decoded directions are normalized box points, so the set of reachable
/// directions is the cone spanned by the box.
struct SearchRegion {
  std::vector<double> a_min;
  std::vector<double> a_max;
  double beta_min = 0.0;
  double beta_max = 8.0;
  int generation_created = 0;

  std::size_t dimension() const noexcept { return a_min.size(); }
  double width(std::size_t i) const { return a_max[i] - a_min[i]; }
  /// Euclidean diameter of the direction box.
  double diameter() const;
  double min_width() const;
  /// True when some positive multiple of `direction` lies in the box, i.e.
  /// the direction can be produced by decoding a point of this region.
  bool covers_direction(std::span<const double> direction) const;
};

}  // namespace hlri
