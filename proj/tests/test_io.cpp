#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rabi/csv.hpp"
#include "rabi/params.hpp"
#include "rabi/quantum.hpp"
#include "rabi/run.hpp"
#include "rabi/svg.hpp"

namespace fs = std::filesystem;
using namespace rabi;
using namespace rabi::io;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rabi_io_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("numbers round-trip through CSV text") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -2.125}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("CSV tables carry metadata and reject ragged rows") {
  CsvTable t({"a", "b", "c"});
  t.meta("command", "dos");
  t.meta("ratio", 1000.0);
  t.add_row({1.5, 2LL, std::string("+")});
  CHECK_THROWS(t.add_row({1.0}));
  const std::string s = t.str();
  CHECK(s.find("# command=dos\n") == 0);
  CHECK(s.find("# ratio=1000\n") != std::string::npos);
  CHECK(s.find("a,b,c\n1.5,2,+\n") != std::string::npos);

  const auto dir = scratch("csv");
  t.write(dir / "t.csv");
  const auto back = read_csv(dir / "t.csv");
  CHECK(back.meta.at("command") == "dos");
  CHECK(back.columns == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0][2] == "+");
}

TEST_CASE("SVG output is a self-contained document") {
  Plot p;
  p.axes = Axes{"title <&>", "x", "y"};
  p.axes.vlines = {0.5};
  p.series.push_back(Series{"line", {0, 1, 2}, {0, 1, 4}});
  p.series.push_back(Series{"dots", {0, 1}, {1, 2}, true, "#ff0000", {0.0, 1.0}});
  const auto svg = render_svg(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("title &lt;&amp;&gt;") != std::string::npos);
  const auto ticks = nice_ticks(0.0, 1.0);
  CHECK(ticks.front() >= 0.0);
  CHECK(ticks.back() <= 1.0);
  CHECK(ticks.size() >= 3);
}

TEST_CASE("argument parsing and config precedence") {
  const auto c = parse_args({"dos", "--g", "1.4", "--ratio", "500"});
  CHECK(c.command == Command::Dos);
  CHECK(c.g == 1.4);
  CHECK(c.effective_ratio() == 500.0);
  CHECK(parse_args({"spectrum"}).effective_ratio() == 40.0);
  CHECK(parse_args({"observables"}).effective_ratio() == 1000.0);

  const auto dir = scratch("config");
  std::ofstream(dir / "c.json") << R"({"g": 1.1, "ratio": 200, "window": 4, "emit_svg": true})";
  const auto cf = parse_args({"dos", "--config", (dir / "c.json").string(), "--g", "1.3"});
  CHECK(cf.g == 1.3);
  CHECK(cf.effective_ratio() == 200.0);
  CHECK(cf.window == 4);
  CHECK(cf.emit_svg);

  CHECK_THROWS_AS(parse_args({}), UsageError);
  CHECK_THROWS_AS(parse_args({"bogus"}), UsageError);
  CHECK_THROWS_AS(parse_args({"dos", "--ratio", "0.5"}), UsageError);
  CHECK_THROWS_AS(parse_args({"asymptotics", "--g", "0.5"}), UsageError);
  CHECK_THROWS_AS(parse_args({"dos", "--window", "1"}), UsageError);
}

TEST_CASE("repeated spectrum runs are byte-identical and reproducible from metadata") {
  const auto a = scratch("spec_a"), b = scratch("spec_b");
  std::ostringstream log;
  for (const auto& dir : {a, b}) {
    auto c = parse_args({"spectrum", "--g-min", "0", "--g-max", "2", "--g-steps", "5", "--levels", "8", "--out",
                         dir.string(), "--emit-svg"});
    CHECK(run(c, log) == 0);
  }
  CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
  CHECK(fs::exists(a / "spectrum.svg"));
  CHECK(fs::exists(a / "spectrum.json"));

  const auto csv = read_csv(a / "spectrum.csv");
  const double omega0 = std::stod(csv.meta.at("omega0"));
  const double ratio = std::stod(csv.meta.at("ratio"));
  CHECK(csv.meta.at("command") == "spectrum");
  CHECK(csv.rows.size() == 5 * 2 * 8);
  // Re-derive one row from the recorded parameters.
  const auto& row = csv.rows[2 * 8 * 3 + 5];
  const double g = std::stod(row[0]);
  const Parity par = row[1] == "+" ? Parity::Plus : Parity::Minus;
  const auto k = std::stoul(row[2]);
  const auto p = RabiParams::from_coupling(omega0, omega0 * ratio, g);
  const auto s = diagonalize(build_parity_chain(p, par, default_truncation(p)), k + 1);
  CHECK(std::stod(row[3]) == s.energies[k]);
  CHECK(std::stod(row[4]) == s.eps[k]);
}

TEST_CASE("asymptotics command reports the critical exponent") {
  const auto dir = scratch("asym");
  std::ostringstream log;
  CHECK(run(parse_args({"asymptotics", "--g", "1", "--out", dir.string()}), log) == 0);
  const auto j = load_json(dir / "asymptotics.json");
  CHECK(j["exponent"].get<double>() == doctest::Approx(-0.25).epsilon(0.02));
  CHECK(j["law"] == "power");
  const auto csv = read_csv(dir / "asymptotics_curve.csv");
  CHECK(csv.columns == std::vector<std::string>{"eps", "distance", "nu"});
  CHECK(csv.rows.size() == 40);

  const auto dir2 = scratch("asym_log");
  CHECK(run(parse_args({"asymptotics", "--g", "1.2", "--out", dir2.string()}), log) == 0);
  const auto j2 = load_json(dir2 / "asymptotics.json");
  CHECK(j2["slope_above"].get<double>() == doctest::Approx(j2["law_prefactor"].get<double>()).epsilon(0.02));
  CHECK(j2["slope_below"].get<double>() == doctest::Approx(j2["law_prefactor"].get<double>()).epsilon(0.02));
}

TEST_CASE("command-line tool exit codes") {
  const std::string cli = RABI_CLI_PATH;
  CHECK(std::system((cli + " bogus >/dev/null 2>&1").c_str()) != 0);
  const auto dir = scratch("cli");
  const std::string cmd = cli + " gapmap --g-max 1 --g-steps 3 --levels 5 --out " + dir.string() + " >/dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  const auto csv = read_csv(dir / "gapmap.csv");
  CHECK(csv.rows.size() == 15);
  CHECK(csv.meta.at("command") == "gapmap");
}
