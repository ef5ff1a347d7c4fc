#pragma once

#include <span>

#include "hlri/genotype.hpp"
#include "hlri/problem_model.hpp"
#include "hlri/repair_types.hpp"

namespace hlri {

/// G at the standard-space origin.
double origin_value(const BenchmarkProblem& problem);

/// Everything a repair needs besides the direction and the start point.
struct RepairContext {
  const BenchmarkProblem& problem;
  double g0;        // G(0), must be > 0
  double beta_max;  // upper end of the search annulus, scales the runaway bound
};

/// Nonlinear increment Delta_max * (2 exp(((|g| - g0) / g0) ln 2) - 1).
/// Equals delta_max at |g| = g0 and 0 at |g| = 0. Throws DegenerateProblem
/// when g0 <= 0.
double increment(double g_abs, double g0, double delta_max);

struct StepResult {
  double beta = 0.0;
  double g = 0.0;
  double delta_beta = 0.0;
};

/// One move along `direction`: outward when g_k >= 0, inward otherwise,
/// clamped at beta = 0. Costs one limit-state evaluation.
StepResult repair_step(double beta_k, double g_k, std::span<const double> direction, double delta_max,
                       double g0, const BenchmarkProblem& problem);

/// Strict decrease of |g|.
inline bool stable(double g_prev_abs, double g_next_abs) { return g_next_abs < g_prev_abs; }

/// Line repair along a frozen direction starting at beta0.
///
/// Each iteration tries the step with the current amplitude. If |g| does not
/// strictly decrease, the amplitude is reduced geometrically,
/// alpha^j * min(beta^k, Delta_max) for j = 1..stability_retries, until a
/// stable step is found; otherwise the candidate with the smallest |g| is
/// taken (earliest on ties) and counted as unstable. The reduced amplitude
/// is kept for later iterations.
///
/// Stops on |g| <= eta (total), on beta > beta_cap * beta_max (no_surface),
/// after stall_limit consecutive unstable steps or k_max iterations
/// (partial). A stall on the safe side that never reduced |g| below its
/// starting value is reported as no_surface. final_beta is the iterate with
/// the smallest |g|.
RepairOutcome repair_direction(std::span<const double> direction, double beta0, const RepairContext& context,
                               const RepairConfig& config);

/// Repairs the genotype's decoded direction from its current beta and writes
/// the result back (beta := final_beta, repair := outcome).
const RepairOutcome& repair(MixedGenotype& genotype, const RepairContext& context, const RepairConfig& config);

/// strong: g kept one sign along the trace; weak: the sign flipped at least
/// once while |g| decreased strictly at every step; undetermined otherwise,
/// including any trace that does not end with |g| <= eta.
ConvergenceMode classify_mode(std::span<const TraceEntry> trace, double eta);

}  // namespace hlri
