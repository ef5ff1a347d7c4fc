#pragma once

#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "hlri/problem_model.hpp"

namespace hlri::oracle {

enum class Method { brute_force, hlrf, closed_form };
std::string to_string(Method method);

struct OracleResult {
  double beta = 0.0;
  Vector direction;
  Method method = Method::brute_force;
  long evaluations = 0;
};

nlohmann::json to_json(const OracleResult& result);

struct RayScan {
  int grid_points = 512;
  double beta_cap = 16.0;
  double tol = 1e-10;
};

/// Distance to the first sign change of G(beta a) on [0, beta_cap]: a uniform
/// grid locates the bracket, bisection shrinks it to `tol`. Empty when G
/// keeps its origin sign along the whole ray.
std::optional<double> beta_along(std::span<const double> direction, const BenchmarkProblem& problem,
                                 const RayScan& scan = {}, long* evaluations = nullptr);

struct BruteForceOptions {
  int angles = 4096;          // N = 2: uniform grid on the circle
  int directions = 65536;     // N = 3, 4: Halton point set mapped to the sphere
  RayScan scan{512, 16.0, 1e-10};
};

/// Minimum of beta_along over a dense direction set followed by coordinate
/// descent on the sphere. Desk scale only (N <= 4). Throws ConfigError for
/// larger N and std::runtime_error when no direction reaches the surface.
OracleResult brute_force_mpp(const BenchmarkProblem& problem, const BruteForceOptions& options = {});

struct HlrfOptions {
  int max_iter = 100;
  double tol = 1e-10;
  double fd_step = 1e-5;
  double beta_cap = 16.0;
};

/// Hasofer-Lind / Rackwitz-Fiessler fixed point with central-difference
/// gradients. Empty on divergence (iterate norm above 10 beta_cap), on
/// hitting max_iter, or when the limit point is not on the surface.
std::optional<OracleResult> hlrf(const BenchmarkProblem& problem, std::span<const double> y0,
                                 const HlrfOptions& options = {});

/// Known closed-form answer, when the benchmark carries one.
std::optional<OracleResult> closed_form(const BenchmarkProblem& problem);

}  // namespace hlri::oracle
