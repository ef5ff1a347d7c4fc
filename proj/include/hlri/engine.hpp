#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlri/evolution.hpp"
#include "hlri/fitness.hpp"
#include "hlri/genotype.hpp"
#include "hlri/problem_model.hpp"
#include "hlri/region.hpp"
#include "hlri/repair.hpp"
#include "hlri/zoom.hpp"

namespace hlri {

/// Penalty fields left empty fall back to default_penalty(g0, beta_max).
struct PenaltyOverrides {
  std::optional<double> C;
  std::optional<double> lambda;
  std::optional<double> K;
  std::optional<double> q;
  std::optional<double> eta;

  PenaltyParams resolve(double g0, double beta_max) const;
};

struct RunConfig {
  std::uint64_t seed = 1;
  EvolutionConfig evolution;
  RepairConfig repair;  // repair.eta is replaced by the resolved penalty eta
  PenaltyOverrides penalty;
  ZoomConfig zoom;
  double beta_min = 0.0;
  double beta_max = 8.0;
  int bits_per_var = 5;
  int max_generations = 300;
  int workers = 1;  // threads used for repair batches; never changes results
  // Re-repair the reported direction with a tolerance 1e-6 * eta so beta_hl
  // is the distance to the surface along that direction, not merely within eta.
  bool polish = true;

  /// Throws ConfigError naming the offending field.
  void validate(std::size_t dimension) const;
};

struct GenerationRecord {
  int t = 0;
  int stage = 1;
  double best_fitness = 0.0;
  std::optional<double> best_beta;  // incumbent high-content beta so far
  double region_diameter = 0.0;
  double distinct_fraction = 0.0;
  long evaluations = 0;  // cumulative
};

struct StageBoundaries {
  std::optional<int> t1;               // first reduction (stage 1 complete)
  std::optional<int> t_diversity_end;  // zooming stopped on loss of diversity
  int t_final = 0;
};

struct RunReport {
  std::string problem;
  std::uint64_t seed = 0;
  double beta_hl = 0.0;
  Vector mpp_standard;
  Vector mpp_physical;
  double p_f = 0.0;
  double g0 = 0.0;
  PenaltyParams penalty;
  StageBoundaries stages;
  int generations = 0;
  long evaluations = 0;
  std::size_t clamp_events = 0;
  std::optional<int> zoom_loss_events;  // reductions that lost the known MPP direction
  MixedGenotype best;
  std::vector<GenerationRecord> history;
  std::vector<SearchRegion> region_history;
};

/// No high-content genotype was found; carries the best partial result.
class SurfaceNotFound : public std::runtime_error {
 public:
  SurfaceNotFound(const std::string& what, MixedGenotype best, long evaluations, int generations)
      : std::runtime_error(what), best_(std::move(best)), evaluations_(evaluations), generations_(generations) {}
  const MixedGenotype& best() const noexcept { return best_; }
  long evaluations() const noexcept { return evaluations_; }
  int generations() const noexcept { return generations_; }

 private:
  MixedGenotype best_;
  long evaluations_;
  int generations_;
};

/// Hooks for tests and tracing. Called from the coordinating thread only.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_repair(const MixedGenotype& /*genotype*/) {}
  virtual void on_generation(const GenerationRecord& /*record*/, const Population& /*population*/) {}
  virtual void on_reduction(const SearchRegion& /*before*/, const SearchRegion& /*after*/) {}
};

/// Three-stage search: find the surface with the repaired population, zoom
/// the direction box every t_Z generations while the population stays
/// diverse, then refine until delta_t generations have passed since the
/// first reduction. Throws DegenerateProblem when G(0) <= eta and
/// SurfaceNotFound when no high-content genotype ever appears.
RunReport run(const BenchmarkProblem& problem, const RunConfig& config, RunObserver* observer = nullptr);

/// Phi(-beta).
double probability_of_failure(double beta);

}  // namespace hlri
