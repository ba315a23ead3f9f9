#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "pqfreq/cli.hpp"
#include "pqfreq/geometry.hpp"

namespace fs = std::filesystem;
using pqfreq::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = dispatch(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("pqfreq_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("help output matches the golden files") {
  for (std::string sub : {"", "domain", "solve", "bounds", "verify", "sweep"}) {
    CAPTURE(sub);
    std::vector<std::string> args;
    if (!sub.empty()) args.push_back(sub);
    args.push_back("--help");
    Run r = run(args);
    CHECK(r.code == 0);
    std::string golden = std::string(PQFREQ_GOLDEN_DIR) + "/help_" + (sub.empty() ? "root" : sub) + ".txt";
    CHECK(r.out == pqfreq::read_file(golden));
    CHECK(r.out == pqfreq::cli::help_text(sub));
  }
}

TEST_CASE("usage errors exit 2 with one message line") {
  for (std::vector<std::string> args : {std::vector<std::string>{"frobnicate"},
                                        {"domain", "--spec", "disk:r=1"},
                                        {"domain", "--spec", "hexagon:r=1", "--h", "0.1", "--out", "/tmp/x.pgm"},
                                        {"domain", "--spec", "disk:r=-1", "--h", "0.1", "--out", "/tmp/x.pgm"},
                                        {"bounds", "--N", "2", "--p", "abc"},
                                        {"verify", "--config", "/nonexistent/campaign.json"}}) {
    Run r = run(args);
    CAPTURE(args[0]);
    CHECK(r.code == 2);
    CHECK(r.err.rfind("pqfreq: ", 0) == 0);
  }
}

TEST_CASE("domain then solve on the unit disk") {
  fs::path dir = scratch("solve");
  std::string mask = (dir / "disk.pgm").string();
  Run d = run({"domain", "--spec", "disk:r=1", "--h", "0.0625", "--out", mask});
  REQUIRE(d.code == 0);
  CHECK(fs::exists(mask));
  CHECK(fs::exists(pqfreq::sidecar_path(mask)));

  Run s = run({"solve", "--domain", mask, "--p", "2", "--q", "2"});
  REQUIRE(s.code == 0);
  auto j = nlohmann::json::parse(s.out);
  CHECK(j["quantity"] == "lambda");
  CHECK(j["converged"] == true);
  const double lam = j["value"].get<double>();
  CHECK(lam > 5.0);
  CHECK(lam < 5.9);

  std::string report = (dir / "r.json").string();
  Run t = run({"solve", "--domain", mask, "--quantity", "lambda-inf", "--p", "4", "--out", report});
  REQUIRE(t.code == 0);
  auto jt = nlohmann::json::parse(pqfreq::read_file(report));
  CHECK(jt["quantity"] == "lambda-inf");

  CHECK(run({"solve", "--domain", mask, "--p", "2", "--q", "inf"}).code == 2);
  CHECK(run({"solve", "--domain", mask, "--quantity", "lambda-inf", "--p", "2"}).code == 2);
  CHECK(run({"solve", "--domain", mask, "--quantity", "capacity"}).code == 2);
}

TEST_CASE("bounds prints one record per tuple") {
  Run r = run({"bounds", "--N", "2", "--p", "2,4", "--q", "2", "--k", "4", "--r", "0.5"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0]["scaling_exponent"].get<double>() == doctest::Approx(2.0));
  CHECK(j[1].contains("punctured_linf_lower"));

  Run c = run({"bounds", "--N", "2", "--p", "2", "--q", "2,4", "--csv"});
  REQUIRE(c.code == 0);
  CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 3);
}

TEST_CASE("verify writes rows and summary, exit 3 on failing suite") {
  fs::path dir = scratch("verify");
  std::string cfg = (dir / "c.json").string();
  pqfreq::write_file_atomic(cfg, R"({"name":"t","h":0.0625,"domains":["disk:r=1"],"exponents":[[2,2]]})");
  Run r = run({"verify", "--config", cfg, "--out-dir", (dir / "out").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "rows.csv"));
  CHECK(fs::exists(dir / "out" / "summary.json"));
  auto s = nlohmann::json::parse(pqfreq::read_file((dir / "out" / "summary.json").string()));
  CHECK(s["fail_count"] == 0);

  // a theta ratio of 4 cannot be met by a 48x spread: the sweep reports failure
  std::string cfg2 = (dir / "s.json").string();
  pqfreq::write_file_atomic(cfg2, R"({"kind":"asymptotic","quantity":"theta_q_limit","p_grid":[4,32]})");
  Run sw = run({"sweep", "--config", cfg2, "--out-dir", (dir / "sw").string()});
  CHECK(sw.code == 3);
  CHECK(fs::exists(dir / "sw" / "series.csv"));
}
