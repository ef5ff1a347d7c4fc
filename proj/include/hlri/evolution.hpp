#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hlri/genotype.hpp"
#include "hlri/region.hpp"
#include "hlri/rng.hpp"

namespace hlri {

struct EvolutionConfig {
  std::size_t n_P = 50;   // population size
  std::size_t n_E = 15;   // elite size
  std::size_t n_B = 25;   // offspring per generation
  double r_uc = 0.7;      // probability of inheriting a gene from the elite parent
  int epsilon_SC = -1;    // similarity threshold; negative means N - 1
  std::size_t n_bot = 6;  // genotypes reinitialized by implicit mutation

  /// Throws ConfigError naming the offending field.
  void validate(std::size_t dimension) const;
  /// epsilon_SC with the N - 1 default resolved.
  int similarity_threshold(std::size_t dimension) const;
};

/// (beta_min, uniform random bits). Zero-length draws are redrawn up to 100
/// times; after that a single bit of the last draw is flipped.
MixedGenotype random_genotype(const SearchRegion& region, int bits_per_var, Rng& rng);

/// Positive weights f - min(0, f_min) + eps for fitness-proportional draws.
std::vector<double> selection_weights(std::span<const MixedGenotype> group);

/// Index drawn proportionally to `weights`.
std::size_t roulette(std::span<const double> weights, Rng& rng);

/// n_B (elite index, non-elite index) pairs into population.members, each
/// side drawn by its own fitness-proportional roulette. With an empty
/// non-elite both parents come from the elite.
std::vector<std::pair<std::size_t, std::size_t>> select_parents(const Population& population, std::size_t n_B,
                                                                Rng& rng);

/// Biased uniform crossover: every bit and the beta gene come from the elite
/// parent with probability r_uc. The child is unrepaired.
MixedGenotype uniform_crossover(const MixedGenotype& elite_parent, const MixedGenotype& other_parent, double r_uc,
                                const SearchRegion& region, int bits_per_var, Rng& rng);

/// Two genotypes are similar when more than epsilon_SC variable blocks match.
bool similar(const MixedGenotype& lhs, const MixedGenotype& rhs, int epsilon_SC, int bits_per_var);

/// Scans the ranked list from the fittest member and removes every weaker
/// genotype similar to a surviving stronger one. Removed slots are refilled
/// in place with unrepaired random genotypes that are not similar to any
/// survivor. Returns the number of refills.
std::size_t similarity_control(std::vector<MixedGenotype>& extended, int epsilon_SC, const SearchRegion& region,
                               int bits_per_var, Rng& rng);

/// Ranks the union and keeps the top n_P (stable on ties).
std::vector<MixedGenotype> replacement(std::vector<MixedGenotype> extended, std::size_t n_P);
std::vector<MixedGenotype> replacement(const std::vector<MixedGenotype>& population,
                                       const std::vector<MixedGenotype>& offspring, std::size_t n_P);

/// Replaces the bottom n_bot members of a ranked list with unrepaired random
/// genotypes; the rest is untouched.
void implicit_mutation(std::vector<MixedGenotype>& ranked, std::size_t n_bot, const SearchRegion& region,
                       int bits_per_var, Rng& rng);

}  // namespace hlri
