#include "hlri/repair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hlri/errors.hpp"

namespace hlri {

std::string to_string(RepairStatus status) {
  switch (status) {
    case RepairStatus::total: return "total";
    case RepairStatus::partial: return "partial";
    case RepairStatus::no_surface: return "no_surface";
  }
  return "unknown";
}

std::string to_string(ConvergenceMode mode) {
  switch (mode) {
    case ConvergenceMode::strong: return "strong";
    case ConvergenceMode::weak: return "weak";
    case ConvergenceMode::undetermined: return "undetermined";
  }
  return "unknown";
}

void RepairConfig::validate() const {
  auto fail = [](const char* field, const char* why) {
    throw ConfigError(std::string("repair.") + field + ": " + why);
  };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (k_max < 1) fail("k_max", "must be at least 1");
  if (!(eta > 0.0)) fail("eta", "must be positive");
  if (!(beta_ref > 0.0)) fail("beta_ref", "must be positive");
  if (!(beta_cap > 0.0)) fail("beta_cap", "must be positive");
  if (stability_retries < 0) fail("stability_retries", "must be nonnegative");
  if (stall_limit < 1) fail("stall_limit", "must be at least 1");
}

double origin_value(const BenchmarkProblem& problem) {
  const Vector origin(problem.dimension(), 0.0);
  return evaluate_G(origin, problem);
}

double increment(double g_abs, double g0, double delta_max) {
  if (!(g0 > 0.0)) throw DegenerateProblem("increment: g0 must be positive (origin in the safe domain)");
  return delta_max * (2.0 * std::exp((g_abs - g0) / g0 * std::numbers::ln2) - 1.0);
}

StepResult repair_step(double beta_k, double g_k, std::span<const double> direction, double delta_max, double g0,
                       const BenchmarkProblem& problem) {
  const double delta = increment(std::abs(g_k), g0, delta_max);
  double next = (g_k >= 0.0) ? beta_k + delta : beta_k - delta;
  next = std::max(next, 0.0);
  StepResult out;
  out.beta = next;
  out.g = g_along(next, direction, problem);
  out.delta_beta = std::abs(next - beta_k);
  return out;
}

RepairOutcome repair_direction(std::span<const double> direction, double beta0, const RepairContext& context,
                               const RepairConfig& config) {
  if (!(context.g0 > config.eta)) {
    std::ostringstream msg;
    msg << "origin on or beyond failure surface (g0 = " << context.g0 << ", eta = " << config.eta << ")";
    throw DegenerateProblem(msg.str());
  }
  if (beta0 < 0.0) throw ContractError("repair: beta0 must be nonnegative");

  RepairOutcome out;
  double beta = beta0;
  double g = g_along(beta, direction, context.problem);
  out.evaluations = 1;
  double delta_max = config.alpha * std::max(beta0, config.beta_ref);
  out.trace.push_back({0, beta, g, 0.0, delta_max, true});

  double best_beta = beta;
  double best_g = g;
  const double runaway = config.beta_cap * context.beta_max;
  int unstable_streak = 0;
  out.status = RepairStatus::partial;

  if (std::abs(g) <= config.eta) {
    out.status = RepairStatus::total;
  } else {
    for (int k = 0; k < config.k_max; ++k) {
      StepResult step = repair_step(beta, g, direction, delta_max, context.g0, context.problem);
      ++out.evaluations;
      double used_amplitude = delta_max;
      bool is_stable = stable(std::abs(g), std::abs(step.g));

      if (!is_stable && config.stability_retries > 0) {
        const double base = (beta > 0.0) ? std::min(beta, delta_max) : delta_max;
        double factor = 1.0;
        for (int j = 1; j <= config.stability_retries; ++j) {
          factor *= config.alpha;
          const double amplitude = factor * base;
          const StepResult retry = repair_step(beta, g, direction, amplitude, context.g0, context.problem);
          ++out.evaluations;
          if (stable(std::abs(g), std::abs(retry.g))) {
            step = retry;
            used_amplitude = amplitude;
            is_stable = true;
            break;
          }
          if (std::abs(retry.g) < std::abs(step.g)) {
            step = retry;
            used_amplitude = amplitude;
          }
        }
        delta_max = used_amplitude;
      }

      // An overshoot means the amplitude is too large for this neighbourhood:
      // fall back to the beta-proportional amplitude.
      if ((step.g < 0.0) != (g < 0.0) && step.beta > 0.0) delta_max = std::min(delta_max, config.alpha * step.beta);
      beta = step.beta;
      g = step.g;
      out.trace.push_back({k + 1, beta, g, step.delta_beta, used_amplitude, is_stable});
      out.iterations = k + 1;
      if (std::abs(g) < std::abs(best_g)) {
        best_beta = beta;
        best_g = g;
      }
      unstable_streak = is_stable ? 0 : unstable_streak + 1;

      if (std::abs(g) <= config.eta) {
        out.status = RepairStatus::total;
        break;
      }
      if (beta > runaway) {
        out.status = RepairStatus::no_surface;
        break;
      }
      if (unstable_streak >= config.stall_limit) {
        // Stuck on the safe side without any reduction: nothing along this
        // ray moves towards the surface.
        if (best_g > 0.0 && std::abs(best_g) >= std::abs(out.trace.front().g)) out.status = RepairStatus::no_surface;
        break;
      }
    }
  }

  out.final_beta = best_beta;
  out.final_g = best_g;
  out.mode = (out.status == RepairStatus::total) ? classify_mode(out.trace, config.eta)
                                                  : ConvergenceMode::undetermined;
  return out;
}

const RepairOutcome& repair(MixedGenotype& genotype, const RepairContext& context, const RepairConfig& config) {
  if (genotype.direction.size() != context.problem.dimension()) {
    throw ContractError("repair: genotype has no decoded direction of the problem's dimension");
  }
  genotype.repair = repair_direction(genotype.direction, genotype.beta, context, config);
  genotype.beta = genotype.repair->final_beta;
  return *genotype.repair;
}

ConvergenceMode classify_mode(std::span<const TraceEntry> trace, double eta) {
  if (trace.empty() || std::abs(trace.back().g) > eta) return ConvergenceMode::undetermined;
  bool has_positive = false;
  bool has_negative = false;
  bool decreasing = true;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace[k].g > 0.0) has_positive = true;
    if (trace[k].g < 0.0) has_negative = true;
    if (k > 0 && !(std::abs(trace[k].g) < std::abs(trace[k - 1].g))) decreasing = false;
  }
  if (!(has_positive && has_negative)) return ConvergenceMode::strong;
  return decreasing ? ConvergenceMode::weak : ConvergenceMode::undetermined;
}

}  // namespace hlri
