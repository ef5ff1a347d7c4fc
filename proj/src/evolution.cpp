#include "hlri/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hlri/errors.hpp"

namespace hlri {

void EvolutionConfig::validate(std::size_t dimension) const {
  auto fail = [](const char* field, const std::string& why) {
    throw ConfigError(std::string("evolution.") + field + ": " + why);
  };
  if (n_P < 2) fail("n_P", "must be at least 2");
  if (n_E < 1 || n_E >= n_P) fail("n_E", "must satisfy 1 <= n_E < n_P");
  if (n_B < 1) fail("n_B", "must be at least 1");
  if (!(r_uc > 0.0 && r_uc < 1.0)) fail("r_uc", "must lie in (0, 1)");
  if (n_bot < 1 || n_bot >= n_P) fail("n_bot", "must satisfy 1 <= n_bot < n_P");
  if (epsilon_SC > static_cast<int>(dimension)) fail("epsilon_SC", "must not exceed the problem dimension");
}

int EvolutionConfig::similarity_threshold(std::size_t dimension) const {
  return epsilon_SC < 0 ? static_cast<int>(dimension) - 1 : epsilon_SC;
}

MixedGenotype random_genotype(const SearchRegion& region, int bits_per_var, Rng& rng) {
  MixedGenotype g;
  g.beta = region.beta_min;
  g.bits.resize(region.dimension() * static_cast<std::size_t>(bits_per_var));
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (auto& b : g.bits) b = rng.bit() ? 1 : 0;
    try {
      g.direction = decode(g.bits, region, bits_per_var);
      return g;
    } catch (const DecodeError&) {
    }
  }
  // Exhausted: move one variable off its code until the direction exists.
  for (std::size_t i = 0; i < g.bits.size(); ++i) {
    g.bits[i] ^= 1u;
    try {
      g.direction = decode(g.bits, region, bits_per_var);
      return g;
    } catch (const DecodeError&) {
      g.bits[i] ^= 1u;
    }
  }
  throw DecodeError("search region contains no decodable direction");
}

std::vector<double> selection_weights(std::span<const MixedGenotype> group) {
  constexpr double eps = 1e-12;
  double f_min = std::numeric_limits<double>::infinity();
  for (const auto& g : group) f_min = std::min(f_min, g.fitness);
  const double shift = std::min(0.0, f_min);
  std::vector<double> w;
  w.reserve(group.size());
  for (const auto& g : group) w.push_back(g.fitness - shift + eps);
  return w;
}

std::size_t roulette(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

std::vector<std::pair<std::size_t, std::size_t>> select_parents(const Population& population, std::size_t n_B,
                                                                Rng& rng) {
  const auto elite = population.elite();
  const auto others = population.non_elite();
  if (elite.empty()) throw ContractError("select_parents: empty elite");
  const auto elite_w = selection_weights(elite);
  const bool fallback = others.empty();
  const auto other_w = fallback ? elite_w : selection_weights(others);
  const std::size_t other_offset = fallback ? 0 : elite.size();

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n_B);
  for (std::size_t i = 0; i < n_B; ++i) {
    const std::size_t e = roulette(elite_w, rng);
    const std::size_t o = other_offset + roulette(other_w, rng);
    pairs.emplace_back(e, o);
  }
  return pairs;
}

MixedGenotype uniform_crossover(const MixedGenotype& elite_parent, const MixedGenotype& other_parent, double r_uc,
                                const SearchRegion& region, int bits_per_var, Rng& rng) {
  if (elite_parent.bits.size() != other_parent.bits.size()) {
    throw ContractError("uniform_crossover: parents have different bit lengths");
  }
  MixedGenotype child;
  child.bits.resize(elite_parent.bits.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (std::size_t i = 0; i < child.bits.size(); ++i) {
      child.bits[i] = rng.bernoulli(r_uc) ? elite_parent.bits[i] : other_parent.bits[i];
    }
    child.beta = rng.bernoulli(r_uc) ? elite_parent.beta : other_parent.beta;
    try {
      child.direction = decode(child.bits, region, bits_per_var);
      return child;
    } catch (const DecodeError&) {
    }
  }
  child.bits = elite_parent.bits;
  child.beta = elite_parent.beta;
  for (std::size_t i = 0; i < child.bits.size(); ++i) {
    const std::size_t pos = (rng.below(child.bits.size()) + i) % child.bits.size();
    child.bits[pos] ^= 1u;
    try {
      child.direction = decode(child.bits, region, bits_per_var);
      return child;
    } catch (const DecodeError&) {
      child.bits[pos] ^= 1u;
    }
  }
  throw DecodeError("uniform_crossover: no decodable child");
}

bool similar(const MixedGenotype& lhs, const MixedGenotype& rhs, int epsilon_SC, int bits_per_var) {
  return static_cast<long>(equal_variables(lhs, rhs, bits_per_var)) > epsilon_SC;
}

std::size_t similarity_control(std::vector<MixedGenotype>& extended, int epsilon_SC, const SearchRegion& region,
                               int bits_per_var, Rng& rng) {
  const std::size_t n = extended.size();
  std::vector<bool> removed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!removed[j] && similar(extended[i], extended[j], epsilon_SC, bits_per_var)) removed[j] = true;
    }
  }

  auto clashes = [&](const MixedGenotype& candidate, std::size_t slot) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k == slot || removed[k]) continue;
      if (similar(candidate, extended[k], epsilon_SC, bits_per_var)) return true;
    }
    return false;
  };

  std::size_t refills = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!removed[j]) continue;
    MixedGenotype fresh = random_genotype(region, bits_per_var, rng);
    for (int attempt = 0; attempt < 100 && clashes(fresh, j); ++attempt) {
      fresh = random_genotype(region, bits_per_var, rng);
    }
    extended[j] = std::move(fresh);
    removed[j] = false;  // now a survivor that later refills must avoid
    ++refills;
  }
  return refills;
}

std::vector<MixedGenotype> replacement(std::vector<MixedGenotype> extended, std::size_t n_P) {
  rank(extended);
  if (extended.size() > n_P) extended.resize(n_P);
  return extended;
}

std::vector<MixedGenotype> replacement(const std::vector<MixedGenotype>& population,
                                       const std::vector<MixedGenotype>& offspring, std::size_t n_P) {
  std::vector<MixedGenotype> extended = population;
  extended.insert(extended.end(), offspring.begin(), offspring.end());
  return replacement(std::move(extended), n_P);
}

void implicit_mutation(std::vector<MixedGenotype>& ranked, std::size_t n_bot, const SearchRegion& region,
                       int bits_per_var, Rng& rng) {
  if (n_bot >= ranked.size()) throw ContractError("implicit_mutation: n_bot must be smaller than the population");
  for (std::size_t i = ranked.size() - n_bot; i < ranked.size(); ++i) {
    ranked[i] = random_genotype(region, bits_per_var, rng);
  }
}

}  // namespace hlri
