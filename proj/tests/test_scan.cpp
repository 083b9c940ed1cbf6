#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfl/scan.hpp"

using namespace wfl;
namespace fs = std::filesystem;
namespace {

constexpr double pi = std::numbers::pi;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("number parsing with pi suffix") {
  CHECK(parse_number("2.5") == 2.5);
  CHECK(parse_number(" -3e-2 ") == -0.03);
  CHECK(parse_number("pi") == pi);
  CHECK(parse_number("-pi") == -pi);
  CHECK(parse_number("1.1pi") == 1.1 * pi);
  CHECK(parse_number("0.5 pi") == 0.5 * pi);
  CHECK(parse_number("2PI") == 2.0 * pi);
  CHECK_THROWS_AS(parse_number("banana"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_number("1.1ip"), std::invalid_argument);

  const std::vector<double> list = parse_number_list("1, 0.5pi ,.25,");
  REQUIRE(list.size() == 3);
  CHECK(list[0] == 1.0);
  CHECK(list[1] == 0.5 * pi);
  CHECK(list[2] == 0.25);
  CHECK_THROWS_AS(parse_number_list(" , "), std::invalid_argument);
}

TEST_CASE("config parsing, lookups, and overrides") {
  const ExperimentConfig cfg = ExperimentConfig::from_string(
      "# demo\n"
      "experiment = error_map\n"
      "sites=2          # inline comment\n"
      "period = 0.68\n"
      "hz_t = 1.1pi\n"
      "n_list = 8, 16, 32\n"
      "walsh_symmetrize = true\n");
  CHECK(cfg.get("experiment") == "error_map");
  CHECK(cfg.integer("sites") == 2);
  CHECK(cfg.number("period") == 0.68);
  CHECK(cfg.number("hz_t") == 1.1 * pi);
  CHECK(cfg.flag("walsh_symmetrize", false));
  CHECK(cfg.flag("absent", true));
  CHECK(cfg.number("missing", 7.5) == 7.5);
  CHECK(cfg.get("missing", "x") == "x");
  CHECK(!cfg.has("missing"));
  const auto ints = cfg.integer_list("n_list");
  REQUIRE(ints.size() == 3);
  CHECK(ints[2] == 32);

  ExperimentConfig mut = cfg;
  mut.apply_override("sites=3");
  mut.apply_override("fresh = 9");
  CHECK(mut.integer("sites") == 3);
  CHECK(mut.integer("fresh") == 9);
  CHECK_THROWS_AS(mut.apply_override("no_equals"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get("missing"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.flag("experiment", false), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_string("just words\n"), std::invalid_argument);
}

TEST_CASE("power law fitting") {
  std::vector<double> x{2.0, 4.0, 8.0, 16.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -2.0));
  const PowerLawFit fit = fit_power_law(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.rms_residual < 1e-12);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, 0.0, 2.0}), std::invalid_argument);
}

TEST_CASE("worker resolution respects the environment cap") {
  unsetenv("WFL_MAX_WORKERS");
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
  setenv("WFL_MAX_WORKERS", "2", 1);
  CHECK(resolve_workers(8) == 2);
  CHECK(resolve_workers(1) == 1);
  unsetenv("WFL_MAX_WORKERS");
}

TEST_CASE("number formatting survives a round trip") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
  for (double v : {1.0 / 3.0, 6.02e23, -1.6e-19, pi}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("csv reading") {
  TempDir tmp("wfl_csv_test");
  const std::string path = (tmp.path / "t.csv").string();
  {
    std::ofstream out(path);
    out << "alpha,beta,gamma\n1,2,3\n4,,-0.5\n";
  }
  const CsvTable table = read_csv(path);
  REQUIRE(table.header.size() == 3);
  CHECK(table.header[1] == "beta");
  REQUIRE(table.rows.size() == 2);
  CHECK(table.column("gamma") == 2);
  CHECK(table.value(0, table.column("alpha")) == 1.0);
  CHECK(table.value(1, 2) == -0.5);
  CHECK_THROWS(table.column("delta"));
}

TEST_CASE("alias demo run writes data plus a faithful manifest") {
  TempDir tmp("wfl_alias_run");
  ExperimentConfig cfg = ExperimentConfig::from_string(
      "experiment = alias_demo\n"
      "drive = square_wave\n"
      "n_list = 4, 8\n");
  const RunResult res = run_experiment(cfg, tmp.path.string(), 1);
  CHECK(res.rows == 12);
  REQUIRE(res.outputs.size() == 1);

  const CsvTable table = read_csv(res.outputs[0]);
  CHECK(table.rows.size() == 12);
  const int diff = table.column("abs_diff");
  const int conv = table.column("converged");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    CHECK(table.value(r, diff) < 1e-10);
    CHECK(table.value(r, conv) == 1.0);
  }

  const nlohmann::json manifest = nlohmann::json::parse(slurp(res.manifest));
  CHECK(manifest["experiment"] == "alias_demo");
  CHECK(manifest["rows"] == 12);
  CHECK(manifest["outputs"][0] == "alias_demo.csv");
  CHECK(manifest["config"]["n_list"] == "4, 8");
  CHECK(manifest.contains("wall_ms"));
  CHECK(manifest.contains("library_version"));
}

TEST_CASE("error map rows are byte-identical across worker counts") {
  ExperimentConfig cfg = ExperimentConfig::from_string(
      "experiment = error_map\n"
      "sites = 1\n"
      "res = 4\n"
      "period = 1.0\n"
      "n_walsh = 8\n");
  TempDir a("wfl_map_w1"), b("wfl_map_w4");
  const RunResult r1 = run_experiment(cfg, a.path.string(), 1);
  const RunResult r4 = run_experiment(cfg, b.path.string(), 4);
  CHECK(r1.rows == 16);
  CHECK(slurp(r1.outputs[0]) == slurp(r4.outputs[0]));
}

TEST_CASE("unknown experiment is rejected") {
  TempDir tmp("wfl_bad_run");
  ExperimentConfig cfg = ExperimentConfig::from_string("experiment = warp_drive\n");
  CHECK_THROWS_AS(run_experiment(cfg, tmp.path.string(), 1), std::invalid_argument);
}
