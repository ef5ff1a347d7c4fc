#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "hlri/config.hpp"
#include "hlri/engine.hpp"
#include "hlri/errors.hpp"
#include "hlri/oracle.hpp"
#include "hlri/repair.hpp"
#include "hlri/report.hpp"

namespace hlri::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  int workers = 1;
  std::string format = "csv";
  std::string command_line;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("hlri", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* level = std::getenv("HLRI_LOG")) {
    const auto parsed = spdlog::level::from_str(level);
    // from_str maps unknown names to off; only accept real level names.
    if (parsed != spdlog::level::off || std::string(level) == "off") logger->set_level(parsed);
  }
  return logger;
}

fs::path config_dir(const std::string& path) {
  const fs::path p(path);
  return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

fs::path prepare_out(const Options& o) {
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("--out: cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

class LoggingObserver : public RunObserver {
 public:
  explicit LoggingObserver(spdlog::logger& log) : log_(log) {}
  void on_generation(const GenerationRecord& r, const Population&) override {
    log_.debug("t={} stage={} best_fitness={} best_beta={} diameter={} evals={}", r.t, r.stage,
               format_number(r.best_fitness), r.best_beta ? format_number(*r.best_beta) : "-",
               format_number(r.region_diameter), r.evaluations);
  }
  void on_reduction(const SearchRegion& before, const SearchRegion& after) override {
    log_.info("region reduced at t={}: diameter {} -> {}", after.generation_created,
              format_number(before.diameter()), format_number(after.diameter()));
  }

 private:
  spdlog::logger& log_;
};

json history_json(const RunReport& report) {
  json rows = json::array();
  for (const auto& r : report.history) {
    rows.push_back({{"t", r.t},
                    {"stage", r.stage},
                    {"best_fitness", r.best_fitness},
                    {"best_beta", r.best_beta ? json(*r.best_beta) : json(nullptr)},
                    {"region_diameter", r.region_diameter},
                    {"distinct_fraction", r.distinct_fraction},
                    {"evaluations", r.evaluations}});
  }
  return rows;
}

int cmd_run(const Options& o, std::ostream& out, spdlog::logger& log) {
  auto file = config::parse_run_file(config::read_json_file(o.config), config_dir(o.config));
  if (o.seed) file.config.seed = *o.seed;
  file.config.workers = o.workers;
  file.config.validate(file.problem.dimension());
  const fs::path dir = prepare_out(o);

  LoggingObserver observer(log);
  RunReport report;
  try {
    report = hlri::run(file.problem, file.config, &observer);
  } catch (const SurfaceNotFound& e) {
    log.error("{}", e.what());
    log.error("best partial genotype: beta={} |g|={}", format_number(e.best().beta),
              e.best().repair ? format_number(std::abs(e.best().repair->final_g)) : "n/a");
    return solver_failure;
  }

  write_file_atomic(dir / "report.json", dump(to_json(report, file.config)));
  write_file_atomic(dir / "regions.json", dump(regions_to_json(report)));
  if (o.format == "json") {
    write_file_atomic(dir / "history.json", dump(history_json(report)));
  } else {
    write_file_atomic(dir / "history.csv", history_csv(report));
  }
  out << "beta_hl=" << format_number(report.beta_hl) << " p_f=" << format_number(report.p_f)
      << " evaluations=" << report.evaluations << " generations=" << report.generations << '\n';
  return ok;
}

struct Cell {
  std::size_t case_index = 0;
  std::uint64_t seed = 0;
  std::optional<RunReport> report;
  std::string error;
};

std::optional<double> reference_beta(const BenchmarkProblem& problem, const RunConfig& cfg) {
  if (auto cf = oracle::closed_form(problem)) return cf->beta;
  if (problem.dimension() > 4) return std::nullopt;
  try {
    oracle::BruteForceOptions opts;
    opts.scan.beta_cap = cfg.repair.beta_cap * cfg.beta_max;
    return oracle::brute_force_mpp(problem, opts).beta;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

double percentile(std::vector<double> v, double p) {
  // Nearest-rank.
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

int cmd_bench(const Options& o, std::ostream& out, spdlog::logger& log) {
  auto file = config::parse_bench_file(config::read_json_file(o.config), config_dir(o.config));
  config::SeedRange seeds = file.seeds.value_or(config::SeedRange{1, 1});
  if (!o.seeds.empty()) seeds = config::parse_seed_range(o.seeds);
  if (o.seed) seeds = {*o.seed, *o.seed};
  if (o.workers < 1) throw ConfigError("--workers: must be at least 1");
  const fs::path dir = prepare_out(o);

  std::vector<std::optional<double>> refs;
  for (const auto& c : file.cases) refs.push_back(reference_beta(c.problem, file.config));

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < file.cases.size(); ++i) {
    for (std::uint64_t k = 0; k <= seeds.last - seeds.first; ++k) {
      cells.push_back({i, seeds.first + k, std::nullopt, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      Cell& cell = cells[k];
      RunConfig cfg = file.config;
      cfg.seed = cell.seed;
      cfg.workers = 1;
      try {
        cell.report = hlri::run(file.cases[cell.case_index].problem, cfg);
      } catch (const std::exception& e) {
        cell.error = e.what();
        std::lock_guard lock(log_mutex);
        log.warn("{} seed {}: {}", file.cases[cell.case_index].label, cell.seed, e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(o.workers), cells.size());
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  auto rel_error = [&](const Cell& c) -> std::optional<double> {
    const auto& ref = refs[c.case_index];
    if (!c.report || !ref) return std::nullopt;
    return std::abs(c.report->beta_hl - *ref) / *ref;
  };
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& c : cells) {
      json row = {{"benchmark", file.cases[c.case_index].label}, {"seed", c.seed}};
      const auto& ref = refs[c.case_index];
      row["oracle_beta"] = ref ? json(*ref) : json(nullptr);
      if (c.report) {
        const auto err = rel_error(c);
        row["status"] = "ok";
        row["beta_hl"] = c.report->beta_hl;
        row["rel_error"] = err ? json(*err) : json(nullptr);
        row["evaluations"] = c.report->evaluations;
        row["generations"] = c.report->generations;
        row["t1"] = c.report->stages.t1 ? json(*c.report->stages.t1) : json(nullptr);
        row["t_diversity_end"] =
            c.report->stages.t_diversity_end ? json(*c.report->stages.t_diversity_end) : json(nullptr);
        row["t_final"] = c.report->stages.t_final;
      } else {
        row["status"] = "failed";
        row["error"] = c.error;
      }
      rows.push_back(std::move(row));
    }
    write_file_atomic(dir / "summary.json", dump(rows));
  } else {
    std::string csv =
        "benchmark,seed,status,beta_hl,oracle_beta,rel_error,evaluations,generations,t1,t_diversity_end,t_final,"
        "error\n";
    for (const auto& c : cells) {
      csv += csv_field(file.cases[c.case_index].label) + ',' + std::to_string(c.seed) + ',';
      if (c.report) {
        const auto& r = *c.report;
        csv += "ok," + format_number(r.beta_hl) + ',' + opt(refs[c.case_index]) + ',' + opt(rel_error(c)) + ',' +
               std::to_string(r.evaluations) + ',' + std::to_string(r.generations) + ',' + opt_int(r.stages.t1) +
               ',' + opt_int(r.stages.t_diversity_end) + ',' + std::to_string(r.stages.t_final) + ",\n";
      } else {
        csv += "failed,," + opt(refs[c.case_index]) + ",,,,,,," + csv_field(c.error) + '\n';
      }
    }
    write_file_atomic(dir / "summary.csv", csv);
  }

  out << "benchmark ok/total median_rel_error p95_rel_error median_evals p95_evals\n";
  for (std::size_t i = 0; i < file.cases.size(); ++i) {
    std::vector<double> errs, evals;
    std::size_t total = 0;
    for (const auto& c : cells) {
      if (c.case_index != i) continue;
      ++total;
      if (!c.report) continue;
      evals.push_back(static_cast<double>(c.report->evaluations));
      if (auto e = rel_error(c)) errs.push_back(*e);
    }
    out << file.cases[i].label << ' ' << evals.size() << '/' << total << ' '
        << (errs.empty() ? "-" : format_number(percentile(errs, 0.5))) << ' '
        << (errs.empty() ? "-" : format_number(percentile(errs, 0.95))) << ' '
        << (evals.empty() ? "-" : format_number(percentile(evals, 0.5))) << ' '
        << (evals.empty() ? "-" : format_number(percentile(evals, 0.95))) << '\n';
  }
  return ok;
}

int cmd_oracle(const Options& o, std::ostream& out, spdlog::logger& log) {
  const json doc = config::read_json_file(o.config);
  auto file = config::parse_oracle_file(doc, config_dir(o.config));
  const std::string label = config::problem_label(doc.at("problem"));

  std::vector<oracle::OracleResult> results;
  if (auto cf = oracle::closed_form(file.problem)) results.push_back(*cf);
  if (file.problem.dimension() <= 4) {
    try {
      results.push_back(oracle::brute_force_mpp(file.problem, file.brute_force));
    } catch (const std::runtime_error& e) {
      log.warn("brute force: {}", e.what());
    }
  }
  const Vector origin(file.problem.dimension(), 0.0);
  if (auto h = oracle::hlrf(file.problem, origin, file.hlrf)) {
    results.push_back(*h);
  } else {
    log.info("hlrf: no convergence from the origin");
  }
  if (results.empty()) {
    log.error("no oracle reached the failure surface");
    return solver_failure;
  }

  std::string content;
  if (o.format == "json") {
    json j = {{"problem", label},
              {"command", o.command_line},
              {"options",
               {{"angles", file.brute_force.angles},
                {"directions", file.brute_force.directions},
                {"grid_points", file.brute_force.scan.grid_points},
                {"beta_cap", file.brute_force.scan.beta_cap},
                {"tol", file.brute_force.scan.tol},
                {"hlrf_max_iter", file.hlrf.max_iter},
                {"hlrf_tol", file.hlrf.tol}}},
              {"results", json::array()}};
    for (const auto& r : results) j["results"].push_back(oracle::to_json(r));
    content = dump(j);
  } else {
    content = "problem,method,beta,evaluations,direction\n";
    for (const auto& r : results) {
      std::string d;
      for (std::size_t i = 0; i < r.direction.size(); ++i) d += (i ? " " : "") + format_number(r.direction[i]);
      content += csv_field(label) + ',' + oracle::to_string(r.method) + ',' + format_number(r.beta) + ',' +
                 std::to_string(r.evaluations) + ',' + d + '\n';
    }
  }
  if (o.out.empty()) {
    out << content;
  } else {
    const fs::path dir = prepare_out(o);
    const fs::path path = dir / ("oracle_" + label + (o.format == "json" ? ".json" : ".csv"));
    write_file_atomic(path, content);
    out << path.string() << '\n';
  }
  return ok;
}

int cmd_repair_trace(const Options& o, std::ostream& out, spdlog::logger& log) {
  auto file = config::parse_repair_trace_file(config::read_json_file(o.config), config_dir(o.config));
  const double g0 = origin_value(file.problem);
  RepairConfig cfg = file.repair;
  cfg.eta = file.eta.value_or(1e-3 * std::abs(g0));
  const fs::path dir = prepare_out(o);

  const RepairContext ctx{file.problem, g0, file.beta_max};
  RepairOutcome outcome;
  try {
    outcome = repair_direction(file.direction, file.beta0, ctx, cfg);
  } catch (const DegenerateProblem& e) {
    log.error("{}", e.what());
    return solver_failure;
  }

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& e : outcome.trace) {
      rows.push_back({{"k", e.k},
                      {"beta", e.beta},
                      {"g", e.g},
                      {"delta_beta", e.delta_beta},
                      {"delta_max", e.delta_max},
                      {"stable", e.stable}});
    }
    write_file_atomic(dir / "trace.json", dump(rows));
  } else {
    write_file_atomic(dir / "trace.csv", trace_csv(outcome));
  }
  const json summary = {{"status", to_string(outcome.status)},
                        {"mode", to_string(outcome.mode)},
                        {"final_beta", outcome.final_beta},
                        {"final_g", outcome.final_g},
                        {"iterations", outcome.iterations},
                        {"evaluations", outcome.evaluations},
                        {"eta", cfg.eta}};
  write_file_atomic(dir / "outcome.json", dump(summary));
  out << "status=" << to_string(outcome.status) << " mode=" << to_string(outcome.mode)
      << " final_beta=" << format_number(outcome.final_beta) << " iterations=" << outcome.iterations << '\n';
  return ok;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const json doc = config::read_json_file(o.config);
  const fs::path base = config_dir(o.config);
  std::string kind;
  if (doc.is_object() && doc.contains("benchmarks")) {
    kind = "bench";
    config::parse_bench_file(doc, base);
  } else if (doc.is_object() && doc.contains("direction")) {
    kind = "repair-trace";
    config::parse_repair_trace_file(doc, base);
  } else if (doc.is_object() && doc.contains("oracle")) {
    kind = "oracle";
    config::parse_oracle_file(doc, base);
  } else {
    kind = "run";
    config::parse_run_file(doc, base);
  }
  out << "ok: " << kind << " config\n";
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hasofer-Lind reliability index by hybrid micro-genetic search", "hlri"};
  app.require_subcommand(1);
  Options o;
  for (const auto& a : args) o.command_line += (o.command_line.empty() ? "hlri " : " ") + a;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "tabular output format")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* run_cmd = app.add_subcommand("run", "solve one problem and write report.json, history.csv, regions.json");
  add_common(run_cmd);
  run_cmd->add_option("--seed", o.seed, "override the configured seed");
  run_cmd->add_option("--workers", o.workers, "threads used for repair batches")->check(CLI::PositiveNumber);

  auto* bench_cmd = app.add_subcommand("bench", "sweep benchmarks over a seed range into summary.csv");
  add_common(bench_cmd);
  bench_cmd->add_option("--seeds", o.seeds, "inclusive seed range A..B");
  bench_cmd->add_option("--seed", o.seed, "single seed");
  bench_cmd->add_option("--workers", o.workers, "cells run in parallel")->check(CLI::PositiveNumber);

  auto* oracle_cmd = app.add_subcommand("oracle", "closed-form, brute-force and HL-RF reference answers");
  add_common(oracle_cmd);

  auto* trace_cmd = app.add_subcommand("repair-trace", "one line repair with its iteration trace");
  add_common(trace_cmd);

  auto* validate_cmd = app.add_subcommand("validate-config", "parse and validate a configuration file");
  validate_cmd->add_option("--config", o.config, "JSON configuration file")->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  // oracle output defaults to JSON; the other commands default to CSV tables.
  if (oracle_cmd->parsed() && oracle_cmd->count("--format") == 0) o.format = "json";

  auto log = make_logger(err);
  try {
    if (run_cmd->parsed()) return cmd_run(o, out, *log);
    if (bench_cmd->parsed()) return cmd_bench(o, out, *log);
    if (oracle_cmd->parsed()) return cmd_oracle(o, out, *log);
    if (trace_cmd->parsed()) return cmd_repair_trace(o, out, *log);
    return cmd_validate(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const DegenerateProblem& e) {
    err << "solver failure: " << e.what() << '\n';
    return solver_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return solver_failure;
  }
}

}  // namespace hlri::cli
