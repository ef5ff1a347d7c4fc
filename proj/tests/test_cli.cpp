#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = hlri::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory removed on scope exit.
struct Scratch {
  Scratch() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hlri_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~Scratch() { fs::remove_all(path); }
  std::string str(const std::string& child = {}) const { return (child.empty() ? path : path / child).string(); }
  fs::path path;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string write_config(const Scratch& s, const std::string& name, const json& doc) {
  const auto p = s.path / name;
  std::ofstream(p) << doc.dump();
  return p.string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("run writes a report for the linear benchmark") {
  Scratch s;
  const auto r = invoke({"run", "--config", "configs/linear.json", "--out", s.str()});
  CHECK(r.code == 0);
  CHECK(r.out.find("beta_hl=") != std::string::npos);
  const auto report = json::parse(slurp(s.path / "report.json"));
  CHECK(std::abs(report.at("beta_hl").get<double>() - 3.0) <= 0.02);
  CHECK(fs::exists(s.path / "history.csv"));
  CHECK(fs::exists(s.path / "regions.json"));
  CHECK(report.contains("config"));

  // No temporaries are left behind by the atomic writes.
  for (const auto& e : fs::directory_iterator(s.path)) {
    const auto name = e.path().filename().string();
    CHECK_MESSAGE((name == "report.json" || name == "history.csv" || name == "regions.json"), name);
  }
}

TEST_CASE("run honours --seed and --format json") {
  Scratch s;
  CHECK(invoke({"run", "--config", "configs/linear.json", "--out", s.str("a"), "--seed", "7"}).code == 0);
  CHECK(invoke({"run", "--config", "configs/linear.json", "--out", s.str("b"), "--seed", "7", "--format", "json"})
            .code == 0);
  CHECK(slurp(s.path / "a" / "report.json") == slurp(s.path / "b" / "report.json"));
  CHECK(json::parse(slurp(s.path / "a" / "report.json")).at("config").at("seed") == 7);
  const auto history = json::parse(slurp(s.path / "b" / "history.json"));
  CHECK(history.is_array());
  CHECK_FALSE(fs::exists(s.path / "b" / "history.csv"));
}

TEST_CASE("history csv is locale independent with LF endings") {
  Scratch s;
  REQUIRE(invoke({"run", "--config", "configs/sphere.json", "--out", s.str()}).code == 0);
  const std::string csv = slurp(s.path / "history.csv");
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() >= 2);
  const auto cols = std::count(lines[0].begin(), lines[0].end(), ',');
  for (const auto& l : lines) CHECK(std::count(l.begin(), l.end(), ',') == cols);
  // Numbers use '.' as the decimal mark, so no field carries a quoted comma.
  CHECK(csv.find('"') == std::string::npos);
  CHECK(csv.find('.') != std::string::npos);
}

TEST_CASE("exit codes") {
  Scratch s;
  const auto bad = invoke({"run", "--config", "configs/invalid_beta_bounds.json", "--out", s.str()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("beta") != std::string::npos);
  CHECK_FALSE(fs::exists(s.path / "report.json"));

  const auto stuck = invoke({"run", "--config", "configs/unreachable.json", "--out", s.str()});
  CHECK(stuck.code == 2);
  CHECK_FALSE(fs::exists(s.path / "report.json"));

  CHECK(invoke({"run", "--config", "configs/linear.json", "--bogus"}).code == 1);
  CHECK(invoke({"run", "--config", "no/such/file.json"}).code == 1);
  CHECK(invoke({"run", "--config", "configs/linear.json", "--format", "xml"}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({}).code == 1);

  const auto unknown = write_config(s, "typo.json", {{"problem", "linear"}, {"sede", 3}});
  const auto r = invoke({"run", "--config", unknown, "--out", s.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("sede") != std::string::npos);
}

TEST_CASE("validate-config") {
  CHECK(invoke({"validate-config", "--config", "configs/linear.json"}).out == "ok: run config\n");
  CHECK(invoke({"validate-config", "--config", "configs/bench.json"}).out == "ok: bench config\n");
  CHECK(invoke({"validate-config", "--config", "configs/repair_strong.json"}).out == "ok: repair-trace config\n");
  CHECK(invoke({"validate-config", "--config", "configs/oracle_parabolic.json"}).out == "ok: oracle config\n");
  CHECK(invoke({"validate-config", "--config", "configs/invalid_beta_bounds.json"}).code == 1);
}

TEST_CASE("repair-trace modes") {
  Scratch s;
  const auto strong = invoke({"repair-trace", "--config", "configs/repair_strong.json", "--out", s.str("strong")});
  CHECK(strong.code == 0);
  const auto so = json::parse(slurp(s.path / "strong" / "outcome.json"));
  CHECK(so.at("status") == "total");
  CHECK(so.at("mode") == "strong");
  CHECK(std::abs(so.at("final_beta").get<double>() - 3.0) <= so.at("eta").get<double>());
  const auto trace = lines_of(slurp(s.path / "strong" / "trace.csv"));
  // Header, the starting point, then one row per iteration.
  CHECK(trace.size() == static_cast<std::size_t>(so.at("iterations").get<int>()) + 2);

  CHECK(invoke({"repair-trace", "--config", "configs/repair_weak.json", "--out", s.str("weak")}).code == 0);
  const auto wo = json::parse(slurp(s.path / "weak" / "outcome.json"));
  CHECK(wo.at("mode") == "weak");

  CHECK(invoke({"repair-trace", "--config", "configs/repair_no_surface.json", "--out", s.str("none"), "--format",
                "json"})
            .code == 0);
  CHECK(json::parse(slurp(s.path / "none" / "outcome.json")).at("status") == "no_surface");
  CHECK(json::parse(slurp(s.path / "none" / "trace.json")).is_array());

  const auto skew = write_config(s, "skew.json", {{"problem", "linear"}, {"direction", {1, 1}}});
  const auto r = invoke({"repair-trace", "--config", skew, "--out", s.str("skew")});
  CHECK(r.code == 1);
  CHECK(r.err.find("unit") != std::string::npos);
}

TEST_CASE("bench summary is identical for any worker count") {
  Scratch s;
  const auto one = invoke({"bench", "--config", "configs/bench.json", "--out", s.str("one"), "--workers", "1"});
  const auto four = invoke({"bench", "--config", "configs/bench.json", "--out", s.str("four"), "--workers", "4"});
  CHECK(one.code == 0);
  CHECK(four.code == 0);
  const std::string a = slurp(s.path / "one" / "summary.csv");
  CHECK(a == slurp(s.path / "four" / "summary.csv"));
  const auto rows = lines_of(a);
  CHECK(rows.size() == 61);  // header + 3 benchmarks x 20 seeds
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].find(",ok,") != std::string::npos);
  CHECK(a.find('\r') == std::string::npos);
  CHECK(one.out == four.out);

  CHECK(invoke({"bench", "--config", "configs/bench.json", "--out", s.str("few"), "--seeds", "3..4"}).code == 0);
  CHECK(lines_of(slurp(s.path / "few" / "summary.csv")).size() == 7);
  CHECK(invoke({"bench", "--config", "configs/bench.json", "--out", s.str("bad"), "--seeds", "4..3"}).code == 1);

  CHECK(invoke({"bench", "--config", "configs/bench.json", "--out", s.str("js"), "--seed", "2", "--format", "json"})
            .code == 0);
  const auto js = json::parse(slurp(s.path / "js" / "summary.json"));
  CHECK(js.size() == 3);
  CHECK(js[0].at("seed") == 2);
}

TEST_CASE("oracle prints to stdout without --out") {
  const auto r = invoke({"oracle", "--config", "configs/oracle_parabolic.json"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("results").size() >= 1);
  Scratch s;
  const auto f = invoke({"oracle", "--config", "configs/oracle_parabolic.json", "--out", s.str(), "--format", "csv"});
  CHECK(f.code == 0);
  const auto lines = lines_of(slurp(s.path / "oracle_parabolic.csv"));
  CHECK(lines[0] == "problem,method,beta,evaluations,direction");
}

TEST_CASE("help exits cleanly") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("repair-trace") != std::string::npos);
}
