#include "hlri/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hlri/errors.hpp"
#include "hlri/normal.hpp"

namespace hlri::oracle {

std::string to_string(Method method) {
  switch (method) {
    case Method::brute_force: return "brute_force";
    case Method::hlrf: return "hlrf";
    case Method::closed_form: return "closed_form";
  }
  return "unknown";
}

nlohmann::json to_json(const OracleResult& result) {
  return {{"beta", result.beta},
          {"direction", result.direction},
          {"method", to_string(result.method)},
          {"evaluations", result.evaluations}};
}

namespace {

double point_value(double beta, std::span<const double> direction, const BenchmarkProblem& problem) {
  Vector y(direction.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = beta * direction[i];
  return evaluate_G(y, problem);
}

void normalize(Vector& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7};

}  // namespace

std::optional<double> beta_along(std::span<const double> direction, const BenchmarkProblem& problem,
                                 const RayScan& scan, long* evaluations) {
  long evals = 0;
  auto G = [&](double beta) {
    ++evals;
    return point_value(beta, direction, problem);
  };
  std::optional<double> root;
  double lo = 0.0;
  for (int i = 1; i <= scan.grid_points; ++i) {
    const double hi = scan.beta_cap * static_cast<double>(i) / static_cast<double>(scan.grid_points);
    const double g_hi = G(hi);
    if (g_hi <= 0.0) {
      double a = lo;
      double b = hi;
      while (b - a > scan.tol) {
        const double m = 0.5 * (a + b);
        if (G(m) > 0.0) {
          a = m;
        } else {
          b = m;
        }
      }
      root = 0.5 * (a + b);
      break;
    }
    lo = hi;
  }
  if (evaluations) *evaluations += evals;
  return root;
}

OracleResult brute_force_mpp(const BenchmarkProblem& problem, const BruteForceOptions& options) {
  const std::size_t n = problem.dimension();
  if (n > 4) throw ConfigError("brute_force_mpp: desk-scale oracle supports N <= 4");
  OracleResult best;
  best.method = Method::brute_force;
  best.beta = std::numeric_limits<double>::infinity();
  long evals = 0;

  auto consider = [&](const Vector& dir) {
    const auto b = beta_along(dir, problem, options.scan, &evals);
    if (b && *b < best.beta) {
      best.beta = *b;
      best.direction = dir;
    }
    return b.value_or(std::numeric_limits<double>::infinity());
  };

  if (n == 1) {
    consider(Vector{1.0});
    consider(Vector{-1.0});
  } else if (n == 2) {
    for (int k = 0; k < options.angles; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / options.angles;
      consider(Vector{std::cos(theta), std::sin(theta)});
    }
  } else {
    for (int k = 1; k <= options.directions; ++k) {
      Vector dir(n);
      for (std::size_t i = 0; i < n; ++i) {
        dir[i] = normal_quantile(radical_inverse(static_cast<std::uint64_t>(k), kPrimes[i]));
      }
      normalize(dir);
      consider(dir);
    }
  }
  if (!std::isfinite(best.beta)) {
    best.evaluations = evals;
    throw std::runtime_error("brute_force_mpp: no failure surface found along any scanned direction");
  }

  // Coordinate descent on the sphere around the best scanned direction.
  if (n >= 2) {
    double step = (n == 2) ? 4.0 * std::numbers::pi / options.angles : 0.05;
    while (step > 1e-9) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = best.direction;
          trial[i] += sign * step;
          normalize(trial);
          const double before = best.beta;
          consider(trial);
          if (best.beta < before) improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  best.evaluations = evals;
  return best;
}

std::optional<OracleResult> hlrf(const BenchmarkProblem& problem, std::span<const double> y0,
                                 const HlrfOptions& options) {
  const std::size_t n = problem.dimension();
  Vector y(y0.begin(), y0.end());
  long evals = 0;
  auto G = [&](const Vector& p) {
    ++evals;
    return evaluate_G(p, problem);
  };
  const double g_scale = std::max(1.0, std::abs(G(Vector(n, 0.0))));

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const double g = G(y);
    Vector grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vector plus = y;
      Vector minus = y;
      plus[i] += options.fd_step;
      minus[i] -= options.fd_step;
      grad[i] = (G(plus) - G(minus)) / (2.0 * options.fd_step);
    }
    double gg = 0.0;
    double gy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gg += grad[i] * grad[i];
      gy += grad[i] * y[i];
    }
    if (!(gg > 0.0)) return std::nullopt;
    const double scale = (gy - g) / gg;
    Vector next(n);
    double step = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = scale * grad[i];
      step += (next[i] - y[i]) * (next[i] - y[i]);
      norm += next[i] * next[i];
    }
    norm = std::sqrt(norm);
    if (!std::isfinite(norm) || norm > 10.0 * options.beta_cap) return std::nullopt;
    y = std::move(next);
    if (std::sqrt(step) <= options.tol) {
      if (std::abs(G(y)) > 1e-6 * g_scale || !(norm > 0.0)) return std::nullopt;
      OracleResult out;
      out.method = Method::hlrf;
      out.beta = norm;
      out.direction = y;
      normalize(out.direction);
      out.evaluations = evals;
      return out;
    }
  }
  return std::nullopt;
}

std::optional<OracleResult> closed_form(const BenchmarkProblem& problem) {
  if (!problem.known_beta) return std::nullopt;
  OracleResult out;
  out.method = Method::closed_form;
  out.beta = *problem.known_beta;
  if (problem.known_mpp) {
    out.direction = *problem.known_mpp;
    normalize(out.direction);
  }
  return out;
}

}  // namespace hlri::oracle
