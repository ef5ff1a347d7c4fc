#pragma once

#include <cstddef>
#include <span>

#include "hlri/genotype.hpp"
#include "hlri/region.hpp"
#include "hlri/rng.hpp"

namespace hlri {

struct ZoomConfig {
  double delta_a = 0.4;          // minimum side length of a reduced box
  int t_Z = 5;                   // generations between reductions
  int delta_t = 40;              // refinement budget counted from t1
  double diversity_floor = 0.5;  // minimum fraction of distinct bit strings

  void validate() const;
};

/// Direction box [-1, 1]^N with the given beta annulus.
SearchRegion initial_region(double beta_min, double beta_max, std::size_t dimension);

/// On the failure surface (|g| <= eta after repair) with beta inside the
/// annulus. Throws ContractError for unrepaired genotypes.
bool high_content(const MixedGenotype& genotype, const SearchRegion& region, double eta);

/// Every elite genotype is of high content. Throws ContractError when the
/// elite is empty.
bool stage1_complete(std::span<const MixedGenotype> elite, const SearchRegion& region, double eta);

/// Bounding box of the elite's decoded directions. A side narrower than
/// delta_a is re-centred with width delta_a, a side wider than the same side
/// of `previous` is shrunk to that width about its midpoint, and sides
/// leaving [-1, 1] are shifted back inside without losing width.
SearchRegion reduce(std::span<const MixedGenotype> elite, const SearchRegion& previous, const ZoomConfig& config,
                    int generation);

/// Re-encodes the elite in `next` (beta, fitness and repair record kept) and
/// replaces every other member with an unrepaired random genotype of `next`.
/// Returns the number of clamped direction components.
std::size_t recode_population(Population& population, const SearchRegion& next, int bits_per_var, Rng& rng);

/// Distinct bit strings / population size.
double distinct_fraction(std::span<const MixedGenotype> members);

/// Largest spread of any direction component across the elite.
double elite_spread(std::span<const MixedGenotype> elite);

/// distinct_fraction >= diversity_floor and elite_spread > delta_a.
bool diversity_ok(const Population& population, const ZoomConfig& config);

}  // namespace hlri
