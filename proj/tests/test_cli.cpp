#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "palm/io.hpp"

// End-to-end checks of the installed command-line binary.

namespace {

namespace fs = std::filesystem;

std::string cli() { return PALM_CLI_PATH; }

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "palm_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("synth is byte-identical for a fixed seed") {
  auto dir = temp_dir();
  auto a = (dir / "a.csv").string();
  auto b = (dir / "b.csv").string();
  REQUIRE(run("synth --family sine --m 2 --n 999 --seed 5 --out " + a) == 0);
  REQUIRE(run("synth --family sine --m 2 --n 999 --seed 5 --out " + b) == 0);
  CHECK(palm::read_file(a) == palm::read_file(b));
}

TEST_CASE("fit -> eval -> plot pipeline") {
  auto dir = temp_dir();
  auto csv = (dir / "quad.csv").string();
  auto truth = (dir / "quad_truth.json").string();
  auto fit1 = (dir / "fit1.json").string();
  auto fit2 = (dir / "fit2.json").string();
  auto report = (dir / "report.json").string();
  auto svg = (dir / "fig.svg").string();

  REQUIRE(run("synth --family quadrant --n 4000 --seed 3 --out " + csv + " --truth " + truth) == 0);
  REQUIRE(run("fit --input " + csv + " --kmax 10 --space 0,0,1,1 --out " + fit1) == 0);
  REQUIRE(run("fit --input " + csv + " --kmax 10 --space 0,0,1,1 --out " + fit2) == 0);
  CHECK(palm::read_file(fit1) == palm::read_file(fit2));

  REQUIRE(run("eval --learned " + fit1 + " --truth " + truth + " --out " + report) == 0);
  auto report_text = palm::read_file(report);
  CHECK(report_text.find("\"mise\"") != std::string::npos);

  REQUIRE(run("plot --partition " + fit1 + " --points " + csv + " --shade density --out " + svg) == 0);
  auto svg_text = palm::read_file(svg);
  CHECK(svg_text.find("<svg") != std::string::npos);
  CHECK(svg_text.find("polyline") != std::string::npos);
}

TEST_CASE("evaluating a truth file against itself gives zero losses") {
  auto dir = temp_dir();
  auto csv = (dir / "p.csv").string();
  auto truth = (dir / "p_truth.json").string();
  auto report = (dir / "self.json").string();
  REQUIRE(run("synth --family partition --n 500 --seed 11 --k1 3 --k2 3 --out " + csv +
              " --truth " + truth) == 0);
  REQUIRE(run("eval --learned " + truth + " --truth " + truth + " --out " + report) == 0);
  auto doc = palm::read_file(report);
  CHECK(doc.find("\"mise\": 0.0") != std::string::npos);
  CHECK(doc.find("\"l_learn\": 0.0") != std::string::npos);
  CHECK(doc.find("\"l_true\": 0.0") != std::string::npos);
}

TEST_CASE("plot of a single-region partition has no inner polylines") {
  auto dir = temp_dir();
  auto csv = (dir / "u.csv").string();
  auto fitted = (dir / "u_fit.json").string();
  auto svg = (dir / "u.svg").string();
  {
    std::ofstream out(csv);
    out << "x,y\n0.1,0.1\n0.9,0.9\n0.5,0.2\n0.2,0.8\n";
  }
  REQUIRE(run("fit --input " + csv + " --epsilon 0.1 --kmax 4 --space 0,0,1,1 --out " + fitted) == 0);
  REQUIRE(run("plot --partition " + fitted + " --out " + svg) == 0);
  auto text = palm::read_file(svg);
  CHECK(text.find("polyline") == std::string::npos);
}

TEST_CASE("CLI error paths use exit code 2") {
  auto dir = temp_dir();
  auto bad = (dir / "bad.csv").string();
  {
    std::ofstream out(bad);
    out << "x,y\n0.1,0.2\na,b\n";
  }
  CHECK(run("fit --input " + bad + " --out " + (dir / "no.json").string()) == 2);
  CHECK(run("fit --input " + (dir / "missing.csv").string() + " --out x.json") == 2);
  CHECK(run("eval --learned nope.json --truth nope.json --out x.json") == 2);
  CHECK(run("synth --family nope --out x.csv") == 2);
  CHECK(run("plot --partition " + bad + " --out x.svg") == 2);
  CHECK(run("nonsense") == 2);
}

TEST_CASE("empty input fits the whole sample space with a warning") {
  auto dir = temp_dir();
  auto empty = (dir / "empty.csv").string();
  auto fitted = (dir / "empty_fit.json").string();
  {
    std::ofstream out(empty);
    out << "x,y\n";
  }
  REQUIRE(run("fit --input " + empty + " --space 0,0,1,1 --out " + fitted) == 0);
  auto doc = palm::read_partition_json(fitted);
  CHECK(doc.partition.k() == 1);
  CHECK(doc.meta.n == 0);
}
