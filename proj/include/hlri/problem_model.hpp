#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hlri {

using Vector = std::vector<double>;

enum class MarginalKind { normal, lognormal, uniform };

std::string to_string(MarginalKind kind);
MarginalKind marginal_kind_from_string(const std::string& name);

/// One independent random variable.
///   normal:    param1 = mean,           param2 = standard deviation
///   lognormal: param1 = mean of ln(x),  param2 = std dev of ln(x)
///   uniform:   param1 = lower bound,    param2 = upper bound
struct Marginal {
  MarginalKind kind = MarginalKind::normal;
  double param1 = 0.0;
  double param2 = 1.0;

  static Marginal normal(double mean, double std_dev);
  static Marginal lognormal(double log_mean, double log_std_dev);
  static Marginal uniform(double lower, double upper);

  /// Throws ConfigError when the parameters violate the kind's invariants.
  void validate() const;

  bool in_support(double x) const noexcept;
  double to_standard(double x) const;
  double from_standard(double y) const;
};

/// Ordered set of independent marginals; the isoprobabilistic transform is
/// applied coordinate by coordinate.
class UncertaintySpace {
 public:
  UncertaintySpace() = default;
  explicit UncertaintySpace(std::vector<Marginal> marginals);

  /// N independent standard normals (transform is the identity).
  static UncertaintySpace standard(std::size_t dimension);

  std::size_t dimension() const noexcept { return marginals_.size(); }
  const std::vector<Marginal>& marginals() const noexcept { return marginals_; }

  /// y_i = Phi^-1(F_i(x_i)). Throws DomainError naming the first coordinate
  /// outside its marginal's support.
  Vector to_standard(std::span<const double> x) const;
  /// x_i = F_i^-1(Phi(y_i)).
  Vector from_standard(std::span<const double> y) const;

 private:
  std::vector<Marginal> marginals_;
};

struct LimitStateFunction {
  std::string name;
  std::size_t dimension = 0;
  // g(x) on the physical point; g < 0 is failure. Must be pure.
  std::function<double(std::span<const double>)> evaluator;
};

struct BenchmarkProblem {
  UncertaintySpace space;
  LimitStateFunction limit_state;
  std::optional<double> known_beta;
  std::optional<Vector> known_mpp;  // standard space

  std::size_t dimension() const noexcept { return space.dimension(); }
  const std::string& name() const noexcept { return limit_state.name; }
};

/// G(y) = g(T^-1(y)).
double evaluate_G(std::span<const double> y, const BenchmarkProblem& problem);

/// G(beta * a) for a unit direction a. Shares evaluate_G's code path, so the
/// two are bit-identical for the same point.
double g_along(double beta, std::span<const double> direction, const BenchmarkProblem& problem);

/// Checks dimensions and that the standard-space origin lies in the safe
/// domain (G(0) > 0). Throws ConfigError otherwise.
void validate_problem(const BenchmarkProblem& problem);

// ---- analytical benchmarks (all defined on independent standard normals) ----

/// G(y) = beta_star - <alpha, y>; alpha is normalized to unit length.
BenchmarkProblem make_linear(Vector alpha, double beta_star);

/// G(y) = |y - c|^2 - r^2 with |c| > r.
BenchmarkProblem make_offset_sphere(Vector center, double radius);

/// G(y) = c - y2 + kappa * y1^2 (N = 2).
BenchmarkProblem make_parabolic(double c, double kappa);

/// G(y) = max(beta_star - y1, |y2| - half_width) (N = 2). The failure set is
/// a half-strip, so the surface is only reached from a wedge of directions.
BenchmarkProblem make_gapped(double beta_star, double half_width);

/// Sum of coef * prod x_i^p_i over the physical variables.
struct PolynomialTerm {
  double coefficient = 0.0;
  std::vector<int> powers;
};

/// Loads a polynomial limit state from JSON:
///   {"name": "...", "variables": [{"kind": "normal", "param1": 0, "param2": 1}, ...],
///    "terms": [{"coef": 3.0, "powers": [0, 0]}, ...], "known_beta": 3.0}
BenchmarkProblem polynomial_problem_from_json(const nlohmann::json& doc);
BenchmarkProblem load_polynomial_problem(const std::filesystem::path& path);

/// Named benchmark factories. Parameters come from a JSON object whose keys
/// depend on the benchmark; unknown keys are rejected.
class BenchmarkRegistry {
 public:
  using Factory = std::function<BenchmarkProblem(const nlohmann::json& params)>;

  /// Registry with linear, sphere, parabolic and gapped.
  static const BenchmarkRegistry& builtin();

  void add(std::string name, Factory factory);
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;
  /// Builds and validates the problem. Throws ConfigError for unknown names,
  /// bad parameters or an origin outside the safe domain.
  BenchmarkProblem create(const std::string& name, const nlohmann::json& params = nlohmann::json::object()) const;

 private:
  std::map<std::string, Factory> factories_;
};

}  // namespace hlri
