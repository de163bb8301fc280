#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "raman/cli/commands.hpp"

using namespace raman;
using namespace raman::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "raman");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

using Rows = std::vector<std::vector<std::string>>;

Rows parse_csv(const std::string &text) {
  Rows rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const Rows &rows, const std::string &name) {
  auto it = std::find(rows.at(0).begin(), rows.at(0).end(), name);
  REQUIRE(it != rows.at(0).end());
  return static_cast<std::size_t>(it - rows[0].begin());
}

std::vector<double> numbers(const Rows &rows, const std::string &name) {
  const auto c = column(rows, name);
  std::vector<double> v;
  for (std::size_t r = 1; r < rows.size(); ++r) v.push_back(std::stod(rows[r].at(c)));
  return v;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string &name) { return slurp(std::string(RAMAN_GOLDEN_DIR) + "/" + name); }

const std::vector<std::string> kFields{"--pump-intensity", "100", "--stokes-intensity", "50", "--delta-hz", "-2e9"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("table golden files") {
  auto r = run_cli({"table"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out == golden("table_cs_d2.csv"));
  CHECK(run_cli({"table", "--exact"}).out == golden("table_cs_d2_exact.csv"));
  CHECK(run_cli({"table", "--atom", "cs", "--line", "d2", "--qp", "1", "--qs", "1"}).out ==
        golden("table_cs_d2.csv"));
}

TEST_CASE("table values") {
  const int gdot[] = {7, 12, 15, 16, 15, 12, 7};
  auto rows = parse_csv(run_cli({"table"}).out);
  REQUIRE(rows.size() == 8);
  auto g = numbers(rows, "gdot"), s = numbers(rows, "gs_norm_sq"), p = numbers(rows, "gp_norm_sq");
  for (int k = 0; k < 7; ++k) {
    CHECK(std::abs(g[k] - std::sqrt(gdot[k]) / 24) <= 1e-12);
    CHECK(std::abs(s[k] - (5 + k) / 24.0) <= 1e-12);
    CHECK(std::abs(p[k] - (11 - k) / 24.0) <= 1e-12);
  }

  auto shifted = parse_csv(run_cli({"table", "--qp", "0", "--qs", "1"}).out);
  auto g01 = numbers(shifted, "gdot");
  for (int k = 0; k < 7; ++k) {
    const int n = 4 - (k - 3);  // F + 1 - mF
    CHECK(std::abs(g01[k] - std::sqrt(n * (n + 1) / 2.0) / 24) <= 1e-12);
  }

  auto bad = run_cli({"table", "--qp", "1", "--qs", "0"});
  CHECK(bad.code == kUsage);
  CHECK(bad.out.empty());
  CHECK(bad.err.find("(1,1), (-1,-1), (0,1), (0,-1)") != std::string::npos);
}

TEST_CASE("json mirrors csv") {
  auto csv = parse_csv(run_cli(with({"spectrum"}, kFields)).out);
  auto js = nlohmann::json::parse(run_cli(with({"spectrum", "--format", "json"}, kFields)).out);
  REQUIRE(js.is_array());
  REQUIRE(js.size() == csv.size() - 1);
  for (std::size_t r = 0; r < js.size(); ++r) {
    CHECK(js[r]["mF"].get<std::string>() == csv[r + 1][0]);
    for (std::size_t c = 1; c < csv[0].size(); ++c)
      CHECK(js[r][csv[0][c]].get<double>() == std::stod(csv[r + 1][c]));
  }
  auto exact = nlohmann::json::parse(run_cli({"table", "--exact", "--format", "JSON"}).out);
  CHECK(exact[0]["gdot"] == "sqrt(7)/24");
}

TEST_CASE("spectrum") {
  auto r = run_cli(with({"spectrum", "--two-photon-hz", "1000"}, kFields));
  CHECK(r.code == 0);
  CHECK(r.out == golden("spectrum_cs_d2.csv"));

  auto eq = parse_csv(run_cli({"spectrum", "--pump-intensity", "80", "--stokes-intensity", "80", "--delta-hz", "3e9"}).out);
  auto db = numbers(eq, "DeltaB_rad_s"), ob = numbers(eq, "OmegaB_rad_s");
  REQUIRE(db.size() == 7);
  for (int k = 0; k < 7; ++k) {
    CHECK(std::abs(db[k] + db[6 - k]) <= 1e-12 * std::abs(db[0]));
    CHECK(ob[k] == doctest::Approx(ob[6 - k]).epsilon(1e-12));
  }

  auto dark = parse_csv(run_cli({"spectrum", "--pump-intensity", "80", "--stokes-amplitude", "0", "--delta-hz", "3e9"}).out);
  for (double v : numbers(dark, "OmegaB_rad_s")) CHECK(v == 0.0);

  // intensity and amplitude inputs agree
  const double E = intensity_to_amplitude(80.0);
  CHECK(amplitude_to_intensity(E) == doctest::Approx(80.0).epsilon(1e-14));
  auto via_amp = parse_csv(run_cli({"spectrum", "--pump-amplitude", format_number(E), "--stokes-intensity", "80",
                                    "--delta-hz", "3e9"}).out);
  auto ob2 = numbers(via_amp, "OmegaB_rad_s");
  for (int k = 0; k < 7; ++k) CHECK(ob2[k] == doctest::Approx(ob[k]).epsilon(1e-14));

  auto scan = run_cli(with({"spectrum", "--scan-from-hz", "-5000", "--scan-to-hz", "5000", "--scan-points", "5"}, kFields));
  auto rows = parse_csv(scan.out);
  CHECK(rows.size() == 1 + 5 * 7);
  auto d = numbers(rows, "delta_rad_s");
  CHECK(d.front() == doctest::Approx(-2 * 3.141592653589793 * 5000));
  CHECK(d.back() == doctest::Approx(2 * 3.141592653589793 * 5000));
  CHECK(scan.out == run_cli(with({"spectrum", "--scan-from-hz", "-5000", "--scan-to-hz", "5000", "--scan-points", "5"}, kFields)).out);

  CHECK(run_cli(with({"spectrum", "--scan-from-hz", "5", "--scan-to-hz", "5", "--scan-points", "3"}, kFields)).code == kUsage);
  CHECK(run_cli(with({"spectrum", "--scan-points", "3"}, kFields)).code == kUsage);
}

TEST_CASE("spectrum regime warnings") {
  // detuned by the ground splitting: the other leg is resonant
  auto r = run_cli({"spectrum", "--pump-intensity", "10", "--stokes-intensity", "10", "--delta-hz", "9.192631770e9"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
  CHECK(r.out.find("warning") == std::string::npos);
  CHECK(parse_csv(r.out).size() == 8);

  auto strict = run_cli({"spectrum", "--pump-intensity", "10", "--stokes-intensity", "10", "--delta-hz",
                         "9.192631770e9", "--strict"});
  CHECK(strict.code == kRegime);
  CHECK(strict.out.empty());
}

TEST_CASE("fig2 data") {
  auto rows = parse_csv(run_cli({"spectrum", "--fig2"}).out);
  CHECK(rows[0] == std::vector<std::string>{"I", "mF", "gdot_11", "gdot_01"});
  CHECK(rows.size() == 1 + 1 + 3 + 5 + 7 + 9);
  // Cs block: centre maximum for (1,1), mF = -3 maximum for (0,1)
  double best11 = 0, best01 = 0;
  std::string arg11, arg01;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r][0] != "7/2") continue;
    if (std::stod(rows[r][2]) > best11) best11 = std::stod(rows[r][2]), arg11 = rows[r][1];
    if (std::stod(rows[r][3]) > best01) best01 = std::stod(rows[r][3]), arg01 = rows[r][1];
  }
  CHECK(arg11 == "0");
  CHECK(arg01 == "-3");
}

TEST_CASE("evolve") {
  const std::vector<std::string> balanced{"--pump-rabi-hz", "0.6,0.8", "--stokes-rabi-hz", "0.8,0.6",
                                          "--delta-hz", "100", "--samples", "8"};
  // equal norms: no lightshift, resonant at delta = 0, full contrast
  auto r = run_cli(with({"evolve"}, balanced));
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"t_s", "P0", "P1"});
  CHECK(rows.size() == 10);
  CHECK(rows[1] == std::vector<std::string>{"0", "1", "0"});
  auto p0 = numbers(rows, "P0");
  CHECK(*std::min_element(p0.begin(), p0.end()) < 1e-12);

  auto custom = parse_csv(run_cli({"evolve", "--pump-rabi-hz", "0.6,0.8", "--stokes-rabi-hz", "0.8,0.6", "--delta-hz", "100", "--t-final", "2", "--samples", "4"}).out);
  CHECK(custom.size() == 6);
  CHECK(numbers(custom, "t_s").back() == 2.0);

  auto ortho = run_cli({"evolve", "--pump-rabi-hz", "1,0", "--stokes-rabi-hz", "0,1", "--delta-hz", "100"});
  CHECK(ortho.code == kUsage);
  CHECK(ortho.err.find("--t-final") != std::string::npos);

  CHECK(run_cli({"evolve", "--pump-rabi-hz", "1,2", "--stokes-rabi-hz", "1", "--delta-hz", "100"}).code == kUsage);
  CHECK(run_cli({"evolve", "--pump-intensity", "1", "--delta-hz", "1e9"}).code == kUsage);
  CHECK(run_cli({"evolve", "--pump-intensity", "1", "--pump-amplitude", "1", "--stokes-intensity", "1",
                 "--delta-hz", "1e9"}).code == kUsage);
  CHECK(run_cli({"evolve", "--pump-intensity", "1", "--stokes-intensity", "1", "--delta-hz", "1e9", "--mf", "4"})
            .code == kUsage);

  auto atom = run_cli({"evolve", "--pump-intensity", "1e4", "--stokes-intensity", "1e4", "--delta-hz", "-5e9",
                       "--mf", "-3", "--two-photon-hz", "100", "--samples", "16"});
  CHECK(atom.code == 0);
  CHECK(parse_csv(atom.out).size() == 18);
}

TEST_CASE("evolve against the integrator") {
  // ||Omega|| = sqrt(2) Hz, Delta = 200 ||Omega||
  auto r = run_cli({"evolve", "--pump-rabi-hz", "0.6,0.8", "--stokes-rabi-hz", "0.3,0.9", "--delta-hz",
                    "282.842712474619", "--two-photon-hz", "0.001", "--samples", "40", "--oracle"});
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  CHECK(rows[0].size() == 6);
  CHECK(rows[1][3] == "1");
  auto a0 = numbers(rows, "P0"), n0 = numbers(rows, "P0_oracle");
  auto a1 = numbers(rows, "P1"), n1 = numbers(rows, "P1_oracle");
  double worst = 0;
  for (std::size_t k = 0; k < a0.size(); ++k)
    worst = std::max({worst, std::abs(a0[k] - n0[k]), std::abs(a1[k] - n1[k])});
  CHECK(worst <= 0.02);
  CHECK(r.err.find("oracle:") != std::string::npos);

  auto fail = run_cli({"evolve", "--pump-rabi-hz", "1", "--stokes-rabi-hz", "1", "--delta-hz", "20", "--oracle",
                       "--max-norm-drift", "1e-17", "--samples", "4"});
  CHECK(fail.code == kNumerical);
  CHECK(fail.err.find("norm drift") != std::string::npos);
}

TEST_CASE("validate") {
  auto deep = run_cli({"validate", "--pump-intensity", "10", "--stokes-intensity", "10", "--delta-hz", "-3e9", "--strict"});
  CHECK(deep.code == 0);
  auto rows = parse_csv(deep.out);
  CHECK(rows[0] == std::vector<std::string>{"criterion", "margin", "threshold", "pass"});
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r][3] == "true");

  // ||Omega|| equal to the ground splitting
  auto blurred = parse_csv(run_cli({"validate", "--pump-rabi-hz", "1", "--stokes-rabi-hz", "0", "--delta-hz", "1e6",
                                    "--ground-splitting-hz", "1"}).out);
  for (std::size_t r = 1; r < blurred.size(); ++r)
    CHECK(blurred[r][3] == (blurred[r][0] == "ground_resolution" ? "false" : "true"));

  auto on_other_leg = run_cli({"validate", "--pump-rabi-hz", "1", "--stokes-rabi-hz", "1", "--delta-hz", "5000",
                               "--ground-splitting-hz", "5000"});
  CHECK(on_other_leg.code == 0);
  auto legs = parse_csv(on_other_leg.out);
  CHECK(legs[column(legs, "margin")].size() == 4);
  bool zero_margin_fail = false;
  for (std::size_t r = 1; r < legs.size(); ++r)
    if (legs[r][3] == "false" && std::stod(legs[r][1]) == 0.0) zero_margin_fail = true;
  CHECK(zero_margin_fail);

  auto strict = run_cli({"validate", "--pump-rabi-hz", "1", "--stokes-rabi-hz", "1", "--delta-hz", "5000",
                         "--ground-splitting-hz", "5000", "--strict"});
  CHECK(strict.code == kRegime);
  CHECK(strict.out == on_other_leg.out);
}

TEST_CASE("eigs") {
  auto three = parse_csv(run_cli({"eigs", "--pump-rabi-hz", "1", "--stokes-rabi-hz", "1", "--delta-hz", "100"}).out);
  REQUIRE(three.size() == 4);
  auto lam = numbers(three, "lambda_analytic");
  CHECK(std::count(lam.begin(), lam.end(), 0.0) == 1);
  const auto kind = column(three, "kind");
  CHECK(three[3][kind] == "intermediate");

  auto r = run_cli({"eigs", "--random-levels", "4", "--delta-hz", "-1000", "--seed", "11"});
  REQUIRE(r.code == 0);
  auto six = parse_csv(r.out);
  REQUIRE(six.size() == 7);
  int upper = 0;
  const auto ok = column(six, "within_bound");
  for (std::size_t i = 1; i < six.size(); ++i) {
    upper += six[i][kind] == "intermediate";
    CHECK(six[i][ok] == "true");
  }
  CHECK(upper == 4);
  auto ex = numbers(six, "lambda_exact"), num = numbers(six, "lambda_numeric");
  for (std::size_t i = 0; i < ex.size(); ++i) CHECK(std::abs(ex[i] - num[i]) <= 1e-10 * std::max(1.0, std::abs(ex[i])));

  CHECK(r.out == run_cli({"eigs", "--random-levels", "4", "--delta-hz", "-1000", "--seed", "11"}).out);
  CHECK(r.out != run_cli({"eigs", "--random-levels", "4", "--delta-hz", "-1000", "--seed", "12"}).out);

  auto atom = run_cli({"eigs", "--pump-intensity", "1e3", "--stokes-intensity", "1e3", "--delta-hz", "1e9"});
  CHECK(atom.code == 0);
  CHECK(parse_csv(atom.out).size() == 1 + 2 + 4);
}

TEST_CASE("config file") {
  const auto path = std::filesystem::temp_directory_path() / "raman_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "# Cs spectrum\n"
         "atom = Cs\n"
         "line = D2\n"
         "pump-intensity = 100\n"
         "stokes-intensity = 50\n"
         "delta-hz = -2e9\n"
         "two-photon-hz = 1000\n";
  }
  auto r = run_cli({"spectrum", "--config", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out == golden("spectrum_cs_d2.csv"));

  // flags win over the file
  auto overridden = run_cli({"spectrum", "--config", path.string(), "--two-photon-hz", "0"});
  CHECK(overridden.out != r.out);
  CHECK(overridden.out == run_cli(with({"spectrum"}, kFields)).out);

  {
    std::ofstream f(path, std::ios::app);
    f << "no-such-key = 1\n";
  }
  CHECK(run_cli({"spectrum", "--config", path.string()}).code == kUsage);
  std::filesystem::remove(path);
  CHECK(run_cli({"spectrum", "--config", path.string()}).code == kUsage);
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kUsage);
  CHECK(run_cli({"frobnicate"}).code == kUsage);
  CHECK(run_cli({"table", "--qp", "2"}).code == kUsage);
  CHECK(run_cli({"table", "--format", "xml"}).code == kUsage);
  CHECK(run_cli({"table", "--atom", "Xe"}).code == kUsage);
  CHECK(run_cli({"table", "--line", "D3"}).code == kUsage);
  CHECK(run_cli({"table", "--atom-data", "/nonexistent"}).code == kUsage);
  CHECK(run_cli({"spectrum", "--pump-intensity", "1", "--stokes-intensity", "1"}).code == kUsage);
  auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("spectrum") != std::string::npos);
  auto unknown = run_cli({"table", "--bogus"});
  CHECK(unknown.code == kUsage);
  CHECK(unknown.out.empty());
}

TEST_CASE("half-integer parsing") {
  CHECK(parse_half_int("3") == HalfInt::integer(3));
  CHECK(parse_half_int("-3") == HalfInt::integer(-3));
  CHECK(parse_half_int("+2") == HalfInt::integer(2));
  CHECK(parse_half_int("5/2") == HalfInt::from_twice(5));
  CHECK(parse_half_int("-1/2") == HalfInt::from_twice(-1));
  CHECK(parse_half_int("2.5") == HalfInt::from_twice(5));
  CHECK(parse_half_int("-0.5") == HalfInt::from_twice(-1));
  for (const char *bad : {"", "x", "4/2", "1/3", "2.25", "1.5e", "3/"}) CHECK_THROWS_AS(parse_half_int(bad), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e300) == "1.0000000000000001e+300");
  CHECK(format_number(std::nan("")) == "nan");
  Table t;
  t.columns = {"a_s", "b"};
  t.add({1.5, std::string("x,y")});
  std::ostringstream csv, js;
  write_csv(csv, t);
  write_json(js, t);
  CHECK(csv.str() == "a_s,b\n1.5,\"x,y\"\n");
  CHECK(nlohmann::json::parse(js.str())[0]["b"] == "x,y");
  CHECK_THROWS(t.add({1.0}));
  Table empty;
  empty.columns = {"a"};
  std::ostringstream e;
  write_json(e, empty);
  CHECK(nlohmann::json::parse(e.str()).empty());
}
