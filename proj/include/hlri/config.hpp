#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hlri/engine.hpp"
#include "hlri/oracle.hpp"
#include "hlri/problem_model.hpp"

namespace hlri::config {

/// Parses a JSON file; ConfigError on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Problem reference inside a config file:
///   "linear"
///   {"benchmark": "sphere", "params": {"center": [4, 0], "radius": 1}}
///   {"polynomial": "custom.json"}      (path relative to the config file)
///   {"polynomial": {...inline document...}}
/// An optional "label" names the problem in bench output.
BenchmarkProblem load_problem(const nlohmann::json& spec, const std::filesystem::path& base_dir);
std::string problem_label(const nlohmann::json& spec);

/// Solver settings shared by run and bench files. Keys outside `allowed_extra`
/// and the solver sections are rejected.
RunConfig parse_run_config(const nlohmann::json& doc, const std::vector<std::string>& allowed_extra = {});
nlohmann::json to_json(const RunConfig& config);

struct RunFile {
  BenchmarkProblem problem;
  nlohmann::json problem_spec;
  RunConfig config;
};
RunFile parse_run_file(const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct SeedRange {
  std::uint64_t first = 1;
  std::uint64_t last = 1;
  std::size_t count() const { return static_cast<std::size_t>(last - first + 1); }
};
/// "A..B" (inclusive).
SeedRange parse_seed_range(const std::string& text);

struct BenchCase {
  std::string label;
  BenchmarkProblem problem;
};
struct BenchFile {
  std::vector<BenchCase> cases;
  RunConfig config;
  std::optional<SeedRange> seeds;
};
BenchFile parse_bench_file(const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct RepairTraceFile {
  BenchmarkProblem problem;
  Vector direction;
  double beta0 = 0.0;
  std::optional<double> eta;  // defaults to 1e-3 |G(0)|
  double beta_max = 8.0;
  RepairConfig repair;
};
RepairTraceFile parse_repair_trace_file(const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct OracleFile {
  BenchmarkProblem problem;
  oracle::BruteForceOptions brute_force;
  oracle::HlrfOptions hlrf;
};
OracleFile parse_oracle_file(const nlohmann::json& doc, const std::filesystem::path& base_dir);

}  // namespace hlri::config
