#pragma once

#include <utility>

namespace hlri {

struct PenaltyParams {
  double C = 9.0;        // fitness offset, must exceed beta_max
  double lambda = 1.0;   // penalty scaling
  double K = 1.0;
  double q = 2.0;
  double eta = 1e-3;     // constraint tolerance in limit-state units

  /// Throws ConfigError naming the offending field. `beta_max` is the upper
  /// end of the search annulus; C must exceed it.
  void validate(double beta_max) const;
};

/// K |g|^q when |g| > eta, exactly zero otherwise.
double penalty(double g_value, const PenaltyParams& params);

/// C - beta - lambda * penalty(g).
double fitness(double beta, double g_value, const PenaltyParams& params);

struct ViolationAnchor {
  double g_abs;
  double target;
};

/// Exact solve of target_j = K g_j^q through two anchors. Returns (K, q).
std::pair<double, double> calibrate_penalty(ViolationAnchor first, ViolationAnchor second);

/// Default parameter rule scaled by the origin value g0:
/// eta = 1e-3 |g0|, C = beta_max + 1, lambda = 1, and (K, q) through the
/// anchors (0.1 |g0|, C) and (|g0|, 100 C). Any violation above 0.1 |g0|
/// then costs more than the whole feasible fitness range.
PenaltyParams default_penalty(double g0, double beta_max);

}  // namespace hlri
