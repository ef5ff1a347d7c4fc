#include "hlri/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <type_traits>

#include "hlri/errors.hpp"

namespace hlri::config {

using nlohmann::json;

namespace {

void check_keys(const json& doc, const std::vector<std::string>& allowed, const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
void read(const json& doc, const char* key, T& out, const std::string& where) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception&) {
    const char* expected = std::is_same_v<T, bool>          ? "a boolean"
                           : std::is_arithmetic_v<T>        ? "a number"
                           : std::is_same_v<T, std::string> ? "a string"
                                                            : "an array of numbers";
    throw ConfigError(where + key + ": expected " + expected + ", got " + doc.at(key).type_name());
  }
}

template <class T>
void read(const json& doc, const char* key, std::optional<T>& out, const std::string& where) {
  if (!doc.contains(key)) return;
  T value{};
  read(doc, key, value, where);
  out = value;
}

void read_count(const json& doc, const char* key, std::size_t& out, const std::string& where) {
  if (!doc.contains(key)) return;
  long long v = 0;
  read(doc, key, v, where);
  if (v < 0) throw ConfigError(where + key + ": must be nonnegative");
  out = static_cast<std::size_t>(v);
}

const std::vector<std::string> kRunKeys = {"problem",  "seed",    "beta_min", "beta_max",      "bits_per_var",
                                           "max_generations", "workers", "polish", "evolution", "repair", "penalty",
                                           "zoom"};

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

BenchmarkProblem load_problem(const json& spec, const std::filesystem::path& base_dir) {
  if (spec.is_string()) return BenchmarkRegistry::builtin().create(spec.get<std::string>());
  check_keys(spec, {"label", "benchmark", "params", "polynomial"}, "problem");
  const bool has_benchmark = spec.contains("benchmark");
  const bool has_polynomial = spec.contains("polynomial");
  if (has_benchmark == has_polynomial) {
    throw ConfigError("problem: exactly one of 'benchmark' or 'polynomial' is required");
  }
  if (has_benchmark) {
    std::string name;
    read(spec, "benchmark", name, "problem.");
    return BenchmarkRegistry::builtin().create(name, spec.value("params", json::object()));
  }
  if (spec.contains("params")) throw ConfigError("problem: 'params' only applies to built-in benchmarks");
  const json& poly = spec.at("polynomial");
  if (poly.is_string()) {
    std::filesystem::path p = poly.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return load_polynomial_problem(p);
  }
  return polynomial_problem_from_json(poly);
}

std::string problem_label(const json& spec) {
  if (spec.is_string()) return spec.get<std::string>();
  if (spec.contains("label")) return spec.at("label").get<std::string>();
  if (spec.contains("benchmark")) return spec.at("benchmark").get<std::string>();
  if (spec.contains("polynomial") && spec.at("polynomial").is_string()) {
    return std::filesystem::path(spec.at("polynomial").get<std::string>()).stem().string();
  }
  return "polynomial";
}

RunConfig parse_run_config(const json& doc, const std::vector<std::string>& allowed_extra) {
  std::vector<std::string> allowed = kRunKeys;
  allowed.insert(allowed.end(), allowed_extra.begin(), allowed_extra.end());
  check_keys(doc, allowed, "config");

  RunConfig c;
  read(doc, "seed", c.seed, "");
  read(doc, "beta_min", c.beta_min, "");
  read(doc, "beta_max", c.beta_max, "");
  read(doc, "bits_per_var", c.bits_per_var, "");
  read(doc, "max_generations", c.max_generations, "");
  read(doc, "workers", c.workers, "");
  read(doc, "polish", c.polish, "");

  if (doc.contains("evolution")) {
    const json& e = doc.at("evolution");
    check_keys(e, {"n_P", "n_E", "n_B", "r_uc", "epsilon_SC", "n_bot"}, "evolution");
    read_count(e, "n_P", c.evolution.n_P, "evolution.");
    read_count(e, "n_E", c.evolution.n_E, "evolution.");
    read_count(e, "n_B", c.evolution.n_B, "evolution.");
    read(e, "r_uc", c.evolution.r_uc, "evolution.");
    read(e, "epsilon_SC", c.evolution.epsilon_SC, "evolution.");
    read_count(e, "n_bot", c.evolution.n_bot, "evolution.");
  }
  if (doc.contains("repair")) {
    const json& r = doc.at("repair");
    check_keys(r, {"alpha", "k_max", "beta_ref", "beta_cap", "stability_retries", "stall_limit"}, "repair");
    read(r, "alpha", c.repair.alpha, "repair.");
    read(r, "k_max", c.repair.k_max, "repair.");
    read(r, "beta_ref", c.repair.beta_ref, "repair.");
    read(r, "beta_cap", c.repair.beta_cap, "repair.");
    read(r, "stability_retries", c.repair.stability_retries, "repair.");
    read(r, "stall_limit", c.repair.stall_limit, "repair.");
  }
  if (doc.contains("penalty")) {
    const json& p = doc.at("penalty");
    check_keys(p, {"C", "lambda", "K", "q", "eta"}, "penalty");
    read(p, "C", c.penalty.C, "penalty.");
    read(p, "lambda", c.penalty.lambda, "penalty.");
    read(p, "K", c.penalty.K, "penalty.");
    read(p, "q", c.penalty.q, "penalty.");
    read(p, "eta", c.penalty.eta, "penalty.");
  }
  if (doc.contains("zoom")) {
    const json& z = doc.at("zoom");
    check_keys(z, {"delta_a", "t_Z", "delta_t", "diversity_floor"}, "zoom");
    read(z, "delta_a", c.zoom.delta_a, "zoom.");
    read(z, "t_Z", c.zoom.t_Z, "zoom.");
    read(z, "delta_t", c.zoom.delta_t, "zoom.");
    read(z, "diversity_floor", c.zoom.diversity_floor, "zoom.");
  }
  return c;
}

json to_json(const RunConfig& c) {
  json penalty = json::object();
  if (c.penalty.C) penalty["C"] = *c.penalty.C;
  if (c.penalty.lambda) penalty["lambda"] = *c.penalty.lambda;
  if (c.penalty.K) penalty["K"] = *c.penalty.K;
  if (c.penalty.q) penalty["q"] = *c.penalty.q;
  if (c.penalty.eta) penalty["eta"] = *c.penalty.eta;
  return {
      {"seed", c.seed},
      {"beta_min", c.beta_min},
      {"beta_max", c.beta_max},
      {"bits_per_var", c.bits_per_var},
      {"max_generations", c.max_generations},
      {"polish", c.polish},
      {"evolution",
       {{"n_P", c.evolution.n_P},
        {"n_E", c.evolution.n_E},
        {"n_B", c.evolution.n_B},
        {"r_uc", c.evolution.r_uc},
        {"epsilon_SC", c.evolution.epsilon_SC},
        {"n_bot", c.evolution.n_bot}}},
      {"repair",
       {{"alpha", c.repair.alpha},
        {"k_max", c.repair.k_max},
        {"beta_ref", c.repair.beta_ref},
        {"beta_cap", c.repair.beta_cap},
        {"stability_retries", c.repair.stability_retries},
        {"stall_limit", c.repair.stall_limit}}},
      {"penalty", penalty},
      {"zoom",
       {{"delta_a", c.zoom.delta_a},
        {"t_Z", c.zoom.t_Z},
        {"delta_t", c.zoom.delta_t},
        {"diversity_floor", c.zoom.diversity_floor}}},
  };
}

RunFile parse_run_file(const json& doc, const std::filesystem::path& base_dir) {
  RunConfig cfg = parse_run_config(doc);
  if (!doc.contains("problem")) throw ConfigError("config: 'problem' is required");
  RunFile f{load_problem(doc.at("problem"), base_dir), doc.at("problem"), cfg};
  f.config.validate(f.problem.dimension());
  return f;
}

SeedRange parse_seed_range(const std::string& text) {
  const auto sep = text.find("..");
  SeedRange r;
  auto parse = [&](std::string_view part, std::uint64_t& out) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw ConfigError("seeds: expected A..B, got '" + text + "'");
    }
  };
  if (sep == std::string::npos) {
    parse(text, r.first);
    r.last = r.first;
  } else {
    parse(std::string_view(text).substr(0, sep), r.first);
    parse(std::string_view(text).substr(sep + 2), r.last);
  }
  if (r.last < r.first) throw ConfigError("seeds: range end precedes its start");
  return r;
}

BenchFile parse_bench_file(const json& doc, const std::filesystem::path& base_dir) {
  json settings = doc;
  settings.erase("benchmarks");
  settings.erase("seeds");
  BenchFile f;
  f.config = parse_run_config(settings);
  if (settings.contains("problem")) throw ConfigError("bench config: use 'benchmarks' instead of 'problem'");
  if (!doc.contains("benchmarks") || !doc.at("benchmarks").is_array() || doc.at("benchmarks").empty()) {
    throw ConfigError("bench config: 'benchmarks' must be a nonempty array");
  }
  for (const auto& spec : doc.at("benchmarks")) {
    BenchCase c{problem_label(spec), load_problem(spec, base_dir)};
    f.config.validate(c.problem.dimension());
    f.cases.push_back(std::move(c));
  }
  if (doc.contains("seeds")) {
    const json& s = doc.at("seeds");
    if (s.is_string()) {
      f.seeds = parse_seed_range(s.get<std::string>());
    } else {
      check_keys(s, {"first", "last"}, "seeds");
      SeedRange r;
      read(s, "first", r.first, "seeds.");
      read(s, "last", r.last, "seeds.");
      if (r.last < r.first) throw ConfigError("seeds: range end precedes its start");
      f.seeds = r;
    }
  }
  return f;
}

RepairTraceFile parse_repair_trace_file(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc, {"problem", "direction", "beta0", "eta", "beta_max", "repair"}, "repair-trace config");
  if (!doc.contains("problem")) throw ConfigError("repair-trace config: 'problem' is required");
  if (!doc.contains("direction")) throw ConfigError("repair-trace config: 'direction' is required");
  RepairTraceFile f{load_problem(doc.at("problem"), base_dir), {}, 0.0, std::nullopt, 8.0, {}};
  read(doc, "direction", f.direction, "");
  read(doc, "beta0", f.beta0, "");
  read(doc, "eta", f.eta, "");
  read(doc, "beta_max", f.beta_max, "");
  if (doc.contains("repair")) {
    json wrapper = {{"repair", doc.at("repair")}};
    f.repair = parse_run_config(wrapper).repair;
  }
  if (f.direction.size() != f.problem.dimension()) {
    throw ConfigError("direction: length does not match the problem dimension");
  }
  double norm2 = 0.0;
  for (double v : f.direction) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) throw ConfigError("direction: must be a unit vector");
  if (f.beta0 < 0.0) throw ConfigError("beta0: must be nonnegative");
  if (f.eta && !(*f.eta > 0.0)) throw ConfigError("eta: must be positive");
  if (!(f.beta_max > 0.0)) throw ConfigError("beta_max: must be positive");
  f.repair.validate();
  return f;
}

OracleFile parse_oracle_file(const json& doc, const std::filesystem::path& base_dir) {
  json settings = doc;
  settings.erase("oracle");
  const RunConfig run = parse_run_config(settings);
  if (!doc.contains("problem")) throw ConfigError("oracle config: 'problem' is required");
  OracleFile f{load_problem(doc.at("problem"), base_dir), {}, {}};
  f.brute_force.scan.beta_cap = run.repair.beta_cap * run.beta_max;
  f.hlrf.beta_cap = f.brute_force.scan.beta_cap;
  if (doc.contains("oracle")) {
    const json& o = doc.at("oracle");
    check_keys(o, {"angles", "directions", "grid_points", "beta_cap", "tol", "hlrf_max_iter", "hlrf_tol"}, "oracle");
    read(o, "angles", f.brute_force.angles, "oracle.");
    read(o, "directions", f.brute_force.directions, "oracle.");
    read(o, "grid_points", f.brute_force.scan.grid_points, "oracle.");
    read(o, "beta_cap", f.brute_force.scan.beta_cap, "oracle.");
    read(o, "tol", f.brute_force.scan.tol, "oracle.");
    read(o, "hlrf_max_iter", f.hlrf.max_iter, "oracle.");
    read(o, "hlrf_tol", f.hlrf.tol, "oracle.");
    f.hlrf.beta_cap = f.brute_force.scan.beta_cap;
  }
  if (f.brute_force.angles < 4 || f.brute_force.directions < 1 || f.brute_force.scan.grid_points < 1) {
    throw ConfigError("oracle: resolutions must be positive");
  }
  return f;
}

}  // namespace hlri::config
