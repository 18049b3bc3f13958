#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "sqom/commands.hpp"
#include "sqom/csv.hpp"
#include "sqom/errors.hpp"
#include "sqom/spectra.hpp"

namespace fs = std::filesystem;
using namespace sqom;

namespace {

const std::string scenarios = SQOM_SCENARIO_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("sqom_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  double at(size_t r, const std::string& col) const {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == col) return rows[r][i];
    throw std::runtime_error("no column " + col);
  }
};

Csv read_csv(const fs::path& p) {
  std::ifstream f(p);
  Csv c;
  std::string line, cell;
  std::getline(f, line);
  std::stringstream h(line);
  while (std::getline(h, cell, ',')) c.header.push_back(cell);
  while (std::getline(f, line)) {
    std::stringstream r(line);
    std::vector<double> row;
    while (std::getline(r, cell, ',')) row.push_back(std::stod(cell));
    c.rows.push_back(row);
  }
  return c;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"spectrum", "--phi-deg"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  fs::path d = fresh_dir("usage");
  CHECK(run({"spectrum", "--out", d.string(), "--set", "bogus=1"}).code == 2);
  CHECK(run({"spectrum", "--out", d.string(), "--scenario", "/nonexistent.json"}).code == 2);
  CHECK_FALSE(fs::exists(d / "manifest.json"));
}

TEST_CASE("physics errors exit with 3 and leave nothing behind") {
  fs::path d = fresh_dir("domain");
  Result r = run({"wigner", "--out", d.string(), "--set", "theta=-1.5"});
  CHECK(r.code == 3);
  CHECK(r.err.find("M:") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "manifest.json"));
  CHECK_FALSE(fs::exists(d / "wigner.csv"));
}

TEST_CASE("spectrum") {
  SUBCASE("no squeezing at phi = pi/2 stays above the SQL") {
    fs::path d = fresh_dir("spec_g0");
    Result r = run({"spectrum", "--out", d.string(), "--set", "G_over_kappa=0", "--set", "theta=0",
                    "--omega-min", "10 Hz", "--omega-max", "1 kHz", "--points", "25", "--phi-deg", "90"});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "manifest.json"));
    Csv c = read_csv(d / "spectrum.csv");
    CHECK(c.header.size() == 10);
    CHECK(c.rows.size() == 25);
    for (size_t i = 0; i < c.rows.size(); ++i) CHECK(c.at(i, "n_add") >= c.at(i, "n_add_SQL") * (1 - 1e-9));
  }
  SUBCASE("reference point dips below the SQL at the best phase") {
    fs::path d = fresh_dir("spec_star");
    REQUIRE(run({"spectrum", "--out", d.string(), "--phi-opt"}).code == 0);
    Csv c = read_csv(d / "spectrum.csv");
    REQUIRE(c.rows.size() == 1);
    CHECK(c.at(0, "Omega_rad_s") == doctest::Approx(two_pi * 100).epsilon(1e-15));
    CHECK(c.at(0, "n_add") < c.at(0, "n_add_SQL"));
  }
  SUBCASE("rows ordered Omega outer, phi inner") {
    fs::path d = fresh_dir("spec_order");
    REQUIRE(run({"spectrum", "--out", d.string(), "--omega-min", "50", "--omega-max", "500", "--points", "3",
                 "--phi-deg", "10", "--phi-deg", "20"}).code == 0);
    Csv c = read_csv(d / "spectrum.csv");
    REQUIRE(c.rows.size() == 6);
    CHECK(c.at(0, "Omega_rad_s") == c.at(1, "Omega_rad_s"));
    CHECK(c.at(1, "Omega_rad_s") < c.at(2, "Omega_rad_s"));
    CHECK(c.at(0, "phi_rad") < c.at(1, "phi_rad"));
  }
}

TEST_CASE("map agrees with spectrum and is reproducible") {
  fs::path d = fresh_dir("map");
  std::vector<std::string> args = {"map", "--out", d.string(), "--x", "C_over_CSQL:0.1:0.7:log",
                                   "--y", "theta:-1e-3:-1e-6:log", "--resolution", "9", "--threads", "2"};
  REQUIRE(run(args).code == 0);
  std::string first = slurp(d / "map.csv");
  REQUIRE(run(args).code == 0);
  CHECK(slurp(d / "map.csv") == first);
  CHECK(slurp(d / "map_minima.csv").size() > 0);
  CHECK(fs::exists(d / "map_boundary.csv"));

  Csv m = read_csv(d / "map.csv");
  CHECK(m.rows.size() == 81);
  int compared = 0;
  for (size_t i = 0; i < m.rows.size(); i += 10) {
    if (!std::isfinite(m.at(i, "n_add"))) continue;
    fs::path s = fresh_dir("map_spec");
    std::string C = format_number(m.at(i, "C_over_CSQL")), th = format_number(m.at(i, "theta"));
    REQUIRE(run({"spectrum", "--out", s.string(), "--set", "C_over_CSQL=" + C, "--set", "theta=" + th}).code == 0);
    Csv sp = read_csv(s / "spectrum.csv");
    CHECK(fixture::rel(sp.at(0, "n_add"), m.at(i, "n_add")) <= 1e-12);
    CHECK(fixture::rel(sp.at(0, "S_FF_N2_Hz"), m.at(i, "S_FF_N2_Hz")) <= 1e-12);
    ++compared;
  }
  CHECK(compared > 3);
}

TEST_CASE("degenerate 1x1 map") {
  fs::path d = fresh_dir("map1");
  REQUIRE(run({"map", "--out", d.string(), "--resolution", "1"}).code == 0);
  Csv m = read_csv(d / "map.csv");
  CHECK(m.rows.size() == 1);
  CHECK(m.header.size() == 10);
}

TEST_CASE("stability command") {
  fs::path d = fresh_dir("stab");
  REQUIRE(run({"stability", "--out", d.string(), "--x", "C_over_CSQL:0.01:0.7:log", "--y", "theta:-1e-2:-1e-6:log",
               "--resolution", "16"}).code == 0);
  Csv m = read_csv(d / "stability.csv");
  CHECK(m.rows.size() == 256);
  CHECK(slurp(d / "stability.json").find("\"stable\": true") != std::string::npos);
}

TEST_CASE("compare-linear") {
  fs::path d = fresh_dir("cmp");
  REQUIRE(run({"compare-linear", "--out", d.string()}).code == 0);
  Csv c = read_csv(d / "compare_linear.csv");
  CHECK(c.at(0, "ratio") >= 1e7);
}

TEST_CASE("wigner") {
  fs::path d = fresh_dir("wig");
  REQUIRE(run({"wigner", "--out", d.string(), "--vacuum", "--points", "21"}).code == 0);
  auto j = nlohmann::json::parse(slurp(d / "covariance.json"));
  CHECK(std::abs(j["peak_W4"].get<double>() - 4 / (pi * pi)) < 1e-12);
  REQUIRE(run({"wigner", "--out", d.string(), "--points", "21"}).code == 0);
  j = nlohmann::json::parse(slurp(d / "covariance.json"));
  CHECK(j["marginal_min_eigenvalue"].get<double>() < 0.5);
  CHECK(j["residual"].get<double>() <= 1e-10);
  CHECK(read_csv(d / "wigner.csv").rows.size() == 441);
}

TEST_CASE("opo") {
  fs::path d = fresh_dir("opo");
  REQUIRE(run({"opo", "--out", d.string(), "--scenario", scenarios + "/opo.json", "--points", "50"}).code == 0);
  Csv c = read_csv(d / "opo.csv");
  CHECK(c.rows.size() == 50);
  CHECK(c.header == std::vector<std::string>{"P_p_W", "G_rad_s", "G_over_kappa", "in_domain"});
  CHECK(run({"opo", "--out", d.string()}).code == 2);  // no nu in the reference scenario
}

TEST_CASE("optimize and manifest") {
  fs::path d = fresh_dir("opt");
  Result r = run({"optimize", "--out", d.string(), "--axis", "theta:-0.1:-1e-8:log", "--axis", "phi",
                  "--resolution", "32"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(slurp(d / "optimum.json"));
  CHECK(j["stability_verified"].get<bool>());
  CHECK(j["n_add"].get<double>() < j["n_add_SQL"].get<double>());
  auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  CHECK(m["command"] == "optimize");
  CHECK(m["outputs"].size() == 1);
  CHECK(m["resolved"]["system"]["kappa"].get<double>() == doctest::Approx(two_pi * 2.75e6));
  CHECK(m.contains("toolkit_version"));
  CHECK(m.contains("wall_clock_s"));
}

TEST_CASE("snr command") {
  fs::path d = fresh_dir("snr");
  REQUIRE(run({"snr", "--out", d.string(), "--scenario", scenarios + "/snr.json", "--n-bar", "0", "--n-bar", "0.21",
               "--axis", "theta:-0.1:-1e-8:log", "--axis", "phi", "--resolution", "48"}).code == 0);
  Csv c = read_csv(d / "snr.csv");
  REQUIRE(c.rows.size() == 2);
  CHECK(c.at(0, "SN") / 29.1 < 1.5);
  CHECK(29.1 / c.at(0, "SN") < 1.5);
  CHECK(c.at(1, "SN") / 2.0 < 1.5);
  CHECK(2.0 / c.at(1, "SN") < 1.5);
}

TEST_CASE("axis specs") {
  AxisBounds b = parse_axis_bounds("theta:-1:-0.001:log");
  CHECK(b.axis == Axis::theta);
  CHECK(b.log);
  CHECK(b.lo == -1.0);
  CHECK_THROWS_AS(parse_axis_bounds("theta:-1"), parameter_error);
  CHECK_THROWS_AS(parse_axis_bounds("theta:-1:1:log"), parameter_error);
  CHECK_THROWS_AS(parse_axis_bounds("omega"), parameter_error);
  CHECK_THROWS_AS(parse_axis_bounds("phi:a:1"), parameter_error);
}
