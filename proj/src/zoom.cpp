#include "hlri/zoom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hlri/errors.hpp"
#include "hlri/evolution.hpp"

namespace hlri {

void ZoomConfig::validate() const {
  auto fail = [](const char* field, const char* why) {
    throw ConfigError(std::string("zoom.") + field + ": " + why);
  };
  if (!(delta_a > 0.0 && delta_a <= 2.0)) fail("delta_a", "must lie in (0, 2]");
  if (t_Z < 1) fail("t_Z", "must be at least 1");
  if (delta_t < 1) fail("delta_t", "must be at least 1");
  if (!(diversity_floor > 0.0 && diversity_floor < 1.0)) fail("diversity_floor", "must lie in (0, 1)");
}

SearchRegion initial_region(double beta_min, double beta_max, std::size_t dimension) {
  if (!(beta_min >= 0.0)) throw ConfigError("beta_min: must be nonnegative");
  if (!(beta_max > beta_min)) throw ConfigError("beta_max: must be greater than beta_min");
  if (dimension == 0) throw ConfigError("dimension must be at least 1");
  SearchRegion r;
  r.a_min.assign(dimension, -1.0);
  r.a_max.assign(dimension, 1.0);
  r.beta_min = beta_min;
  r.beta_max = beta_max;
  r.generation_created = 0;
  return r;
}

bool high_content(const MixedGenotype& genotype, const SearchRegion& region, double eta) {
  if (!genotype.repair) throw ContractError("high_content: genotype has not been repaired");
  return std::abs(genotype.repair->final_g) <= eta && genotype.beta >= region.beta_min &&
         genotype.beta <= region.beta_max;
}

bool stage1_complete(std::span<const MixedGenotype> elite, const SearchRegion& region, double eta) {
  if (elite.empty()) throw ContractError("stage1_complete: empty elite");
  return std::all_of(elite.begin(), elite.end(), [&](const MixedGenotype& g) { return high_content(g, region, eta); });
}

namespace {

// Moves [lo, hi] back inside [-1, 1] keeping its width (capped at 2).
void clamp_interval(double& lo, double& hi) {
  if (hi - lo >= 2.0) {
    lo = -1.0;
    hi = 1.0;
    return;
  }
  if (hi > 1.0) {
    lo -= hi - 1.0;
    hi = 1.0;
  }
  if (lo < -1.0) {
    hi += -1.0 - lo;
    lo = -1.0;
  }
}

}  // namespace

SearchRegion reduce(std::span<const MixedGenotype> elite, const SearchRegion& previous, const ZoomConfig& config,
                    int generation) {
  if (elite.empty()) throw ContractError("reduce: empty elite");
  const std::size_t n = previous.dimension();
  SearchRegion next = previous;
  next.generation_created = generation;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& g : elite) {
      lo = std::min(lo, g.direction[i]);
      hi = std::max(hi, g.direction[i]);
    }
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < config.delta_a) {
      hi = mid + 0.5 * config.delta_a;
      lo = mid - 0.5 * config.delta_a;
    }
    const double cap = previous.width(i);
    if (hi - lo > cap) {
      hi = mid + 0.5 * cap;
      lo = mid - 0.5 * cap;
    }
    clamp_interval(lo, hi);
    next.a_min[i] = lo;
    next.a_max[i] = hi;
  }
  return next;
}

std::size_t recode_population(Population& population, const SearchRegion& next, int bits_per_var, Rng& rng) {
  std::size_t clamped = 0;
  const std::size_t n_elite = std::min(population.elite_size, population.members.size());
  for (std::size_t i = 0; i < population.members.size(); ++i) {
    auto& g = population.members[i];
    if (i < n_elite) {
      EncodeResult enc = encode(g.direction, next, bits_per_var);
      clamped += enc.clamped;
      g.bits = std::move(enc.bits);
      g.direction = decode(g.bits, next, bits_per_var);
    } else {
      g = random_genotype(next, bits_per_var, rng);
    }
  }
  return clamped;
}

double distinct_fraction(std::span<const MixedGenotype> members) {
  if (members.empty()) return 0.0;
  std::set<BitString> unique;
  for (const auto& g : members) unique.insert(g.bits);
  return static_cast<double>(unique.size()) / static_cast<double>(members.size());
}

double elite_spread(std::span<const MixedGenotype> elite) {
  if (elite.empty()) return 0.0;
  double spread = 0.0;
  for (std::size_t i = 0; i < elite.front().direction.size(); ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& g : elite) {
      lo = std::min(lo, g.direction[i]);
      hi = std::max(hi, g.direction[i]);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

bool diversity_ok(const Population& population, const ZoomConfig& config) {
  return distinct_fraction(population.members) >= config.diversity_floor &&
         elite_spread(population.elite()) > config.delta_a;
}

}  // namespace hlri
