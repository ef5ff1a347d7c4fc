#include "hlri/fitness.hpp"

#include <cmath>
#include <sstream>

#include "hlri/errors.hpp"

namespace hlri {

void PenaltyParams::validate(double beta_max) const {
  auto fail = [](const char* field, const char* why) {
    throw ConfigError(std::string("penalty.") + field + ": " + why);
  };
  if (!(C > beta_max)) fail("C", "must exceed beta_max so feasible fitness stays positive");
  if (!(lambda > 0.0)) fail("lambda", "must be positive");
  if (!(K > 0.0)) fail("K", "must be positive");
  if (!(q > 0.0)) fail("q", "must be positive");
  if (!(eta > 0.0)) fail("eta", "must be positive");
}

double penalty(double g_value, const PenaltyParams& params) {
  const double violation = std::abs(g_value);
  if (violation > params.eta) return params.K * std::pow(violation, params.q);
  return 0.0;
}

double fitness(double beta, double g_value, const PenaltyParams& params) {
  return params.C - beta - params.lambda * penalty(g_value, params);
}

std::pair<double, double> calibrate_penalty(ViolationAnchor first, ViolationAnchor second) {
  if (!(first.g_abs > 0.0) || !(second.g_abs > 0.0)) {
    throw CalibrationError("penalty anchors need positive violations");
  }
  if (!(first.target > 0.0) || !(second.target > 0.0)) {
    throw CalibrationError("penalty anchors need positive target penalties");
  }
  if (first.g_abs == second.g_abs) throw CalibrationError("penalty anchors need distinct violations");
  const double q = std::log(first.target / second.target) / std::log(first.g_abs / second.g_abs);
  const double K = first.target / std::pow(first.g_abs, q);
  if (!(q > 0.0)) {
    std::ostringstream msg;
    msg << "penalty anchors give a non-increasing penalty (q = " << q << ")";
    throw CalibrationError(msg.str());
  }
  return {K, q};
}

PenaltyParams default_penalty(double g0, double beta_max) {
  const double scale = std::abs(g0);
  if (!(scale > 0.0)) throw DegenerateProblem("origin lies on the failure surface (g0 = 0)");
  PenaltyParams p;
  p.eta = 1e-3 * scale;
  p.C = beta_max + 1.0;
  p.lambda = 1.0;
  const auto [K, q] = calibrate_penalty({0.1 * scale, p.C}, {scale, 100.0 * p.C});
  p.K = K;
  p.q = q;
  return p;
}

}  // namespace hlri
