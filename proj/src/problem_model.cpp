#include "hlri/problem_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "hlri/errors.hpp"
#include "hlri/normal.hpp"

namespace hlri {

std::string to_string(MarginalKind kind) {
  switch (kind) {
    case MarginalKind::normal: return "normal";
    case MarginalKind::lognormal: return "lognormal";
    case MarginalKind::uniform: return "uniform";
  }
  return "unknown";
}

MarginalKind marginal_kind_from_string(const std::string& name) {
  if (name == "normal") return MarginalKind::normal;
  if (name == "lognormal") return MarginalKind::lognormal;
  if (name == "uniform") return MarginalKind::uniform;
  throw ConfigError("unknown marginal kind '" + name + "'");
}

Marginal Marginal::normal(double mean, double std_dev) {
  Marginal m{MarginalKind::normal, mean, std_dev};
  m.validate();
  return m;
}

Marginal Marginal::lognormal(double log_mean, double log_std_dev) {
  Marginal m{MarginalKind::lognormal, log_mean, log_std_dev};
  m.validate();
  return m;
}

Marginal Marginal::uniform(double lower, double upper) {
  Marginal m{MarginalKind::uniform, lower, upper};
  m.validate();
  return m;
}

void Marginal::validate() const {
  if (!std::isfinite(param1) || !std::isfinite(param2)) {
    throw ConfigError(to_string(kind) + " marginal has non-finite parameters");
  }
  switch (kind) {
    case MarginalKind::normal:
    case MarginalKind::lognormal:
      if (!(param2 > 0.0)) {
        throw ConfigError(to_string(kind) + " marginal needs a positive standard deviation");
      }
      break;
    case MarginalKind::uniform:
      if (!(param2 > param1)) {
        throw ConfigError("uniform marginal needs upper > lower");
      }
      break;
  }
}

bool Marginal::in_support(double x) const noexcept {
  switch (kind) {
    case MarginalKind::normal: return std::isfinite(x);
    case MarginalKind::lognormal: return std::isfinite(x) && x > 0.0;
    case MarginalKind::uniform: return x >= param1 && x <= param2;
  }
  return false;
}

double Marginal::to_standard(double x) const {
  switch (kind) {
    case MarginalKind::normal: return (x - param1) / param2;
    // Closed forms of Phi^-1(F(x)); they avoid the precision loss of
    // composing the CDF with the quantile.
    case MarginalKind::lognormal: return (std::log(x) - param1) / param2;
    case MarginalKind::uniform: return normal_quantile((x - param1) / (param2 - param1));
  }
  return 0.0;
}

double Marginal::from_standard(double y) const {
  switch (kind) {
    case MarginalKind::normal: return param1 + param2 * y;
    case MarginalKind::lognormal: return std::exp(param1 + param2 * y);
    case MarginalKind::uniform: return param1 + (param2 - param1) * normal_cdf(y);
  }
  return 0.0;
}

UncertaintySpace::UncertaintySpace(std::vector<Marginal> marginals) : marginals_(std::move(marginals)) {
  if (marginals_.empty()) throw ConfigError("uncertainty space needs at least one variable");
  for (const auto& m : marginals_) m.validate();
}

UncertaintySpace UncertaintySpace::standard(std::size_t dimension) {
  return UncertaintySpace(std::vector<Marginal>(dimension, Marginal{}));
}

Vector UncertaintySpace::to_standard(std::span<const double> x) const {
  if (x.size() != dimension()) throw ContractError("to_standard: dimension mismatch");
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!marginals_[i].in_support(x[i])) {
      std::ostringstream msg;
      msg << "x[" << i << "] = " << x[i] << " is outside the support of its "
          << to_string(marginals_[i].kind) << " marginal";
      throw DomainError(i, msg.str());
    }
    y[i] = marginals_[i].to_standard(x[i]);
  }
  return y;
}

Vector UncertaintySpace::from_standard(std::span<const double> y) const {
  if (y.size() != dimension()) throw ContractError("from_standard: dimension mismatch");
  Vector x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = marginals_[i].from_standard(y[i]);
  return x;
}

double evaluate_G(std::span<const double> y, const BenchmarkProblem& problem) {
  if (y.size() != problem.dimension()) throw ContractError("evaluate_G: dimension mismatch");
  const Vector x = problem.space.from_standard(y);
  return problem.limit_state.evaluator(x);
}

double g_along(double beta, std::span<const double> direction, const BenchmarkProblem& problem) {
  const double norm = std::sqrt(std::inner_product(direction.begin(), direction.end(), direction.begin(), 0.0));
  if (std::abs(norm - 1.0) > 1e-9) throw ContractError("g_along: direction is not a unit vector");
  if (beta < 0.0) throw ContractError("g_along: beta must be nonnegative");
  Vector y(direction.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = beta * direction[i];
  return evaluate_G(y, problem);
}

void validate_problem(const BenchmarkProblem& problem) {
  if (problem.dimension() == 0) throw ConfigError("problem '" + problem.name() + "' has no variables");
  if (problem.limit_state.dimension != problem.dimension()) {
    throw ConfigError("problem '" + problem.name() + "': limit state and uncertainty space disagree on dimension");
  }
  if (!problem.limit_state.evaluator) throw ConfigError("problem '" + problem.name() + "' has no evaluator");
  const Vector origin(problem.dimension(), 0.0);
  const double g0 = evaluate_G(origin, problem);
  if (!(g0 > 0.0)) {
    std::ostringstream msg;
    msg << "problem '" << problem.name() << "': G(0) = " << g0
        << " but the standard-space origin must lie in the safe domain (G > 0)";
    throw ConfigError(msg.str());
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_keys(const nlohmann::json& params, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!params.is_object()) throw ConfigError(where + ": parameters must be a JSON object");
  for (const auto& [key, value] : params.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
T get_or(const nlohmann::json& params, const char* key, T fallback, const std::string& where) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

BenchmarkProblem make_linear(Vector alpha, double beta_star) {
  if (alpha.empty()) throw ConfigError("linear: alpha must be nonempty");
  const double norm = std::sqrt(dot(alpha, alpha));
  if (!(norm > 0.0)) throw ConfigError("linear: alpha must be nonzero");
  if (!(beta_star > 0.0)) throw ConfigError("linear: beta must be positive");
  for (double& v : alpha) v /= norm;

  const std::size_t n = alpha.size();
  BenchmarkProblem p;
  p.space = UncertaintySpace::standard(n);
  p.limit_state.name = "linear";
  p.limit_state.dimension = n;
  p.limit_state.evaluator = [alpha, beta_star](std::span<const double> y) { return beta_star - dot(alpha, y); };
  p.known_beta = beta_star;
  Vector mpp(n);
  for (std::size_t i = 0; i < n; ++i) mpp[i] = beta_star * alpha[i];
  p.known_mpp = std::move(mpp);
  validate_problem(p);
  return p;
}

BenchmarkProblem make_offset_sphere(Vector center, double radius) {
  const double dist = std::sqrt(dot(center, center));
  if (!(radius > 0.0)) throw ConfigError("sphere: radius must be positive");
  if (!(dist > radius)) throw ConfigError("sphere: |center| must exceed the radius");

  const std::size_t n = center.size();
  BenchmarkProblem p;
  p.space = UncertaintySpace::standard(n);
  p.limit_state.name = "sphere";
  p.limit_state.dimension = n;
  p.limit_state.evaluator = [center, radius](std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - center[i]) * (y[i] - center[i]);
    return s - radius * radius;
  };
  p.known_beta = dist - radius;
  Vector mpp(n);
  for (std::size_t i = 0; i < n; ++i) mpp[i] = center[i] / dist * (dist - radius);
  p.known_mpp = std::move(mpp);
  validate_problem(p);
  return p;
}

BenchmarkProblem make_parabolic(double c, double kappa) {
  if (!(c > 0.0)) throw ConfigError("parabolic: c must be positive");
  BenchmarkProblem p;
  p.space = UncertaintySpace::standard(2);
  p.limit_state.name = "parabolic";
  p.limit_state.dimension = 2;
  p.limit_state.evaluator = [c, kappa](std::span<const double> y) { return c - y[1] + kappa * y[0] * y[0]; };
  validate_problem(p);
  return p;
}

BenchmarkProblem make_gapped(double beta_star, double half_width) {
  if (!(beta_star > 0.0)) throw ConfigError("gapped: beta must be positive");
  if (!(half_width > 0.0)) throw ConfigError("gapped: half_width must be positive");
  BenchmarkProblem p;
  p.space = UncertaintySpace::standard(2);
  p.limit_state.name = "gapped";
  p.limit_state.dimension = 2;
  p.limit_state.evaluator = [beta_star, half_width](std::span<const double> y) {
    return std::max(beta_star - y[0], std::abs(y[1]) - half_width);
  };
  p.known_beta = beta_star;
  p.known_mpp = Vector{beta_star, 0.0};
  validate_problem(p);
  return p;
}

BenchmarkProblem polynomial_problem_from_json(const nlohmann::json& doc) {
  const std::string where = "polynomial limit state";
  check_keys(doc, {"name", "variables", "terms", "known_beta"}, where);
  if (!doc.contains("variables") || !doc.at("variables").is_array()) {
    throw ConfigError(where + ": 'variables' must be an array");
  }
  if (!doc.contains("terms") || !doc.at("terms").is_array()) throw ConfigError(where + ": 'terms' must be an array");

  std::vector<Marginal> marginals;
  for (const auto& v : doc.at("variables")) {
    check_keys(v, {"kind", "param1", "param2"}, where + " variable");
    Marginal m;
    m.kind = marginal_kind_from_string(get_or<std::string>(v, "kind", "normal", where));
    m.param1 = get_or<double>(v, "param1", 0.0, where);
    m.param2 = get_or<double>(v, "param2", 1.0, where);
    marginals.push_back(m);
  }
  UncertaintySpace space(std::move(marginals));
  const std::size_t n = space.dimension();

  std::vector<PolynomialTerm> terms;
  for (const auto& t : doc.at("terms")) {
    check_keys(t, {"coef", "powers"}, where + " term");
    PolynomialTerm term;
    term.coefficient = get_or<double>(t, "coef", 0.0, where);
    term.powers = get_or<std::vector<int>>(t, "powers", std::vector<int>(n, 0), where);
    if (term.powers.size() != n) throw ConfigError(where + ": term powers length must equal the number of variables");
    if (std::any_of(term.powers.begin(), term.powers.end(), [](int e) { return e < 0; })) {
      throw ConfigError(where + ": negative powers are not supported");
    }
    terms.push_back(std::move(term));
  }
  if (terms.empty()) throw ConfigError(where + ": at least one term is required");

  BenchmarkProblem p;
  p.space = std::move(space);
  p.limit_state.name = get_or<std::string>(doc, "name", "polynomial", where);
  p.limit_state.dimension = n;
  p.limit_state.evaluator = [terms](std::span<const double> x) {
    double g = 0.0;
    for (const auto& term : terms) {
      double prod = term.coefficient;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (int e = 0; e < term.powers[i]; ++e) prod *= x[i];
      }
      g += prod;
    }
    return g;
  };
  if (doc.contains("known_beta")) p.known_beta = get_or<double>(doc, "known_beta", 0.0, where);
  validate_problem(p);
  return p;
}

BenchmarkProblem load_polynomial_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open polynomial file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("polynomial file " + path.string() + ": " + e.what());
  }
  return polynomial_problem_from_json(doc);
}

const BenchmarkRegistry& BenchmarkRegistry::builtin() {
  static const BenchmarkRegistry registry = [] {
    BenchmarkRegistry r;
    r.add("linear", [](const nlohmann::json& params) {
      check_keys(params, {"dimension", "beta", "alpha"}, "linear");
      const auto n = get_or<std::size_t>(params, "dimension", 0, "linear");
      Vector alpha = get_or<Vector>(params, "alpha", {}, "linear");
      if (alpha.empty()) {
        alpha.assign(n == 0 ? 2 : n, 0.0);
        alpha[0] = 1.0;
      } else if (n != 0 && alpha.size() != n) {
        throw ConfigError("linear: alpha length does not match dimension");
      }
      return make_linear(std::move(alpha), get_or<double>(params, "beta", 3.0, "linear"));
    });
    r.add("sphere", [](const nlohmann::json& params) {
      check_keys(params, {"center", "radius"}, "sphere");
      return make_offset_sphere(get_or<Vector>(params, "center", Vector{4.0, 0.0}, "sphere"),
                                get_or<double>(params, "radius", 1.0, "sphere"));
    });
    r.add("parabolic", [](const nlohmann::json& params) {
      check_keys(params, {"c", "kappa"}, "parabolic");
      return make_parabolic(get_or<double>(params, "c", 5.0, "parabolic"),
                            get_or<double>(params, "kappa", 0.5, "parabolic"));
    });
    r.add("gapped", [](const nlohmann::json& params) {
      check_keys(params, {"beta", "half_width"}, "gapped");
      return make_gapped(get_or<double>(params, "beta", 3.0, "gapped"),
                         get_or<double>(params, "half_width", 1.0, "gapped"));
    });
    return r;
  }();
  return registry;
}

void BenchmarkRegistry::add(std::string name, Factory factory) { factories_[std::move(name)] = std::move(factory); }

bool BenchmarkRegistry::contains(const std::string& name) const { return factories_.count(name) != 0; }

std::vector<std::string> BenchmarkRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, factory] : factories_) out.push_back(name);
  return out;
}

BenchmarkProblem BenchmarkRegistry::create(const std::string& name, const nlohmann::json& params) const {
  const auto it = factories_.find(name);
  if (it == factories_.end()) throw ConfigError("unknown benchmark '" + name + "'");
  BenchmarkProblem p = it->second(params.is_null() ? nlohmann::json::object() : params);
  validate_problem(p);
  return p;
}

}  // namespace hlri
