#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "shg/combin.hpp"

using namespace shg;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome shg_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream s(line);
  for (std::string f; std::getline(s, f, sep);) out.push_back(f);
  return out;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("shg_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string two_point_config(double x0, double x1) {
  std::ostringstream s;
  s << R"({"model": {"b": 0.3, "mass": 1.0},
           "operators": [{"name": "one", "provider": {"kind": "unit"}},
                         {"name": "phi", "provider": {"kind": "k-transform", "q": 1.7, "degree": 1}}],
           "request": {"k": 2, "sequence": ["one", "one"],
                       "points": [[)"
    << x0 << ", " << x1 << R"(], [0.0, 0.0]], "r": [1]}})";
  return s.str();
}

double csv_total(const std::string& out) {
  const auto ls = lines(out);
  REQUIRE_FALSE(ls.empty());
  const auto f = fields(ls.back(), ',');
  REQUIRE(f.size() >= 3);
  REQUIRE(f[0] == "total");
  return std::stod(f[1]);
}

}  // namespace

TEST_CASE("specfun examples") {
  const auto s = shg_run({"specfun", "--what", "s", "--beta", "0", "--b", "0.3"});
  REQUIRE(s.code == 0);
  const auto sl = lines(s.out);
  REQUIRE(sl.size() == 2);
  const auto row = fields(sl[1], ' ');
  CHECK(std::stod(row[2]) == -1.0);
  CHECK(std::stod(row[3]) == 0.0);

  const auto f = shg_run({"specfun", "--what", "f", "--beta", "0"});
  REQUIRE(f.code == 0);
  const auto frow = fields(lines(f.out)[1], ' ');
  CHECK(std::stod(frow[2]) == 0.0);
  CHECK(std::stod(frow[3]) == 0.0);

  const auto g = shg_run({"specfun", "--what", "g-funceq", "--grid", "coarse"});
  CHECK(g.code == 0);
  const auto gl = lines(g.out);
  REQUIRE(gl.size() >= 2);
  CHECK(std::stod(fields(gl.back(), ' ').at(1)) < 1e-10);
}

TEST_CASE("verify suites exit cleanly") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"verify", "cauchy"}, {"verify", "contours", "--quick"},
        {"verify", "compositions"}}) {
    const auto r = shg_run(args);
    CAPTURE(args[1]);
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
  CHECK(shg_run({"verify", "nonsense"}).code == cli::kConfigError);
}

TEST_CASE("verify kernels in quick mode") {
  const auto r = shg_run({"verify", "kernels", "--quick"});
  CHECK(r.code == 0);
  CHECK(r.out.find("direct/dual/mixed spread") != std::string::npos);
}

TEST_CASE("enumerate examples") {
  auto rows = [](const std::vector<std::string>& args) {
    const auto r = shg_run(args);
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() >= 2);
    CHECK(ls[1] == "composition,size,weight,phase_re,phase_im");
    CHECK(ls.size() == 2 + std::stoul(fields(ls[0], ' ').at(1)));
    return static_cast<int>(ls.size()) - 2;
  };
  CHECK(rows({"enumerate", "--k", "3", "--r", "1", "--r", "1"}) == 2);
  CHECK(rows({"enumerate", "--k", "2", "--r", "2"}) == 1);
  int brute = 0;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b)
      for (int c = 0; c <= 1; ++c)
        for (int d = 0; d <= 1; ++d)
          for (int e = 0; e <= 1; ++e)
            for (int f = 0; f <= 1; ++f) {
              // n = (21, 31, 32, 41, 42, 43)
              const bool r1 = a + b + d == 1;
              const bool r2 = b + c + d + e == 1;
              const bool r3 = d + e + f == 1;
              brute += r1 && r2 && r3;
            }
  CHECK(rows({"enumerate", "--k", "4", "--r", "1", "--r", "1", "--r", "1"}) == brute);
  CHECK(shg_run({"enumerate", "--k", "3", "--r", "1"}).code == cli::kConfigError);
}

TEST_CASE("correlator two-point unit fixture") {
  const auto path = write_temp("two_point.json", two_point_config(0.0, 1.0));
  const double k0 = std::cyl_bessel_k(0.0, 1.0) / std::numbers::pi;
  const auto r = shg_run({"correlator", "--config", path});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls.front() == "composition,re(I_n),im(I_n),err,phase_re,phase_im");
  CHECK(ls.size() == 3);
  CHECK(std::abs(csv_total(r.out) - k0) < 1e-8);

  const auto m = shg_run({"correlator", "--config", path, "--mixed", "2"});
  REQUIRE(m.code == 0);
  CHECK(std::abs(csv_total(m.out) - csv_total(r.out)) < 1e-8);

  CHECK(shg_run({"correlator", "--config", path}).out == r.out);

  const auto j = shg_run({"correlator", "--config", path, "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(std::abs(doc["total"][0].get<double>() - k0) < 1e-8);
}

TEST_CASE("correlator writes to an output file") {
  const auto path = write_temp("two_point_out.json", two_point_config(0.0, 1.0));
  const auto target = (std::filesystem::temp_directory_path() / "shg_test_out.csv").string();
  std::filesystem::remove(target);
  const auto r = shg_run({"correlator", "--config", path, "--output", target});
  REQUIRE(r.code == 0);
  std::ifstream f(target);
  std::stringstream text;
  text << f.rdbuf();
  CHECK(std::abs(csv_total(text.str()) - std::cyl_bessel_k(0.0, 1.0) / std::numbers::pi) < 1e-8);
}

TEST_CASE("correlator failure paths") {
  const auto outside = write_temp("outside.json", two_point_config(2.0, 1.0));
  const auto r = shg_run({"correlator", "--config", outside});
  CHECK(r.code == cli::kRegionError);
  CHECK(r.err.find("points 1 and 2") != std::string::npos);

  const auto bad = write_temp("bad.json", R"({"model": {"b": 0.9}})");
  CHECK(shg_run({"correlator", "--config", bad}).code == cli::kConfigError);
  const auto broken = write_temp("broken.json", "{ not json");
  CHECK(shg_run({"correlator", "--config", broken}).code == cli::kConfigError);
  const auto unknown = write_temp(
      "unknown.json",
      R"({"operators": [], "request": {"k": 2, "sequence": ["x", "x"], "points": [[0,1],[0,0]], "r": [1]}})");
  CHECK(shg_run({"correlator", "--config", unknown}).code == cli::kConfigError);
  CHECK(shg_run({"correlator", "--config", "/nonexistent/shg.json"}).code == cli::kConfigError);
  CHECK(shg_run({"specfun", "--what", "s", "--beta", "abc"}).code == cli::kConfigError);
  CHECK(shg_run({}).code == cli::kConfigError);
}

TEST_CASE("eval-ff") {
  const auto path = write_temp("ff.json", two_point_config(0.0, 1.0));
  const auto r = shg_run({"eval-ff", "--config", path, "--operator", "one", "--beta", "0.3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("one") != std::string::npos);
  CHECK(shg_run({"eval-ff", "--config", path, "--operator", "missing", "--beta", "0.3"}).code ==
        cli::kConfigError);
}

TEST_CASE("installed binary reports exit codes") {
  const auto outside = write_temp("outside_bin.json", two_point_config(2.0, 1.0));
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  const std::string bin = SHG_BINARY;
  CHECK(status(bin + " specfun --what s --beta 0") == 0);
  CHECK(status(bin + " correlator --config " + outside) == cli::kRegionError);
  CHECK(status(bin + " correlator") == cli::kConfigError);
}
