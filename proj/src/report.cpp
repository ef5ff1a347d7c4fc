#include "hlri/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hlri/config.hpp"
#include "hlri/errors.hpp"

namespace hlri {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

nlohmann::json to_json(const SearchRegion& region) {
  return {{"a_min", region.a_min},
          {"a_max", region.a_max},
          {"beta_min", region.beta_min},
          {"beta_max", region.beta_max},
          {"generation_created", region.generation_created},
          {"diameter", region.diameter()}};
}

namespace {

nlohmann::json optional_int(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const RunReport& report, const RunConfig& config) {
  nlohmann::json j;
  j["problem"] = report.problem;
  j["seed"] = report.seed;
  j["beta_hl"] = report.beta_hl;
  j["mpp_standard"] = report.mpp_standard;
  j["mpp_physical"] = report.mpp_physical;
  j["p_f"] = report.p_f;
  j["g0"] = report.g0;
  j["stage_boundaries"] = {{"t1", optional_int(report.stages.t1)},
                           {"t_diversity_end", optional_int(report.stages.t_diversity_end)},
                           {"t_final", report.stages.t_final}};
  j["generations"] = report.generations;
  j["evaluations"] = report.evaluations;
  j["clamp_events"] = report.clamp_events;
  j["zoom_loss_events"] = optional_int(report.zoom_loss_events);
  j["best_genotype"] = to_json(report.best);
  j["penalty"] = {{"C", report.penalty.C},
                  {"lambda", report.penalty.lambda},
                  {"K", report.penalty.K},
                  {"q", report.penalty.q},
                  {"eta", report.penalty.eta}};
  j["config"] = config::to_json(config);
  return j;
}

nlohmann::json regions_to_json(const RunReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : report.region_history) arr.push_back(to_json(r));
  return arr;
}

std::string history_csv(const RunReport& report) {
  std::string out = "t,stage,best_fitness,best_beta,region_diameter,distinct_fraction,evaluations\n";
  for (const auto& r : report.history) {
    out += std::to_string(r.t) + ',' + std::to_string(r.stage) + ',' + format_number(r.best_fitness) + ',' +
           (r.best_beta ? format_number(*r.best_beta) : std::string()) + ',' + format_number(r.region_diameter) +
           ',' + format_number(r.distinct_fraction) + ',' + std::to_string(r.evaluations) + '\n';
  }
  return out;
}

std::string trace_csv(const RepairOutcome& outcome) {
  std::string out = "k,beta,g,delta_beta,delta_max\n";
  for (const auto& e : outcome.trace) {
    out += std::to_string(e.k) + ',' + format_number(e.beta) + ',' + format_number(e.g) + ',' +
           format_number(e.delta_beta) + ',' + format_number(e.delta_max) + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hlri
