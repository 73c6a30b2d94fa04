#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdl/runner.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace bdl;
using nlohmann::json;

namespace {

std::string source_dir() {
  const char* s = std::getenv("BDL_SOURCE_DIR");
  return s ? s : ".";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  return j;
}

int run_cli(const std::string& args) {
  const char* cli = std::getenv("BDL_CLI");
  REQUIRE(cli != nullptr);
  const int status = std::system((std::string(cli) + " " + args + " 2>/dev/null").c_str());
  return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) { return "bdl_test_" + name; }

}  // namespace

TEST_CASE("registry holds exactly the thirteen checks") {
  const std::vector<std::string> expect{"det-M-zero",     "lse-residual",   "omega-two-paths", "w-transform",
                                        "solution-ray",   "izergin-oracle", "gaudin-norm",     "slavnov-oracle",
                                        "maba-oracle",    "maba-asymptotics", "appendix-A",    "appendix-B",
                                        "transfer-action"};
  REQUIRE(check_registry().size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(check_registry()[i].name == expect[i]);
  const std::string listing = list_checks();
  for (const auto& n : expect) CHECK(listing.find(n) != std::string::npos);
}

TEST_CASE("explain cites the exercised results") {
  CHECK(explain("det-M-zero").find("Prop. 3.1") != std::string::npos);
  CHECK(explain("appendix-B").find("Eq. (H-XB2)") != std::string::npos);
  CHECK_THROWS_AS(explain("no-such-check"), std::invalid_argument);
}

TEST_CASE("config validation") {
  const json good = read_json(source_dir() + "/configs/periodic_n2_N3.json");
  CHECK_NOTHROW(parse_config(good));
  const ExperimentConfig cfg = parse_config(good);
  CHECK(cfg.suite.size() == 13);
  CHECK(cfg.tolerances.at("det_scaled") == 1e-8);

  json j = good;
  j["model"]["type"] = "xxz";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = good;
  j["model"]["theta"].erase(0);
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = good;
  j["suite"] = {"det-M-zero", "bogus"};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = good;
  j["tolerances"] = {{"unknown", 1.0}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = good;
  j["model"]["c"] = 0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = good;
  j["extra"] = 1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);

  const json maba = read_json(source_dir() + "/configs/maba_N2.json");
  j = maba;
  j["model"]["twist"]["rho1"] = j["model"]["twist"]["kappa_tilde"];
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("periodic config: every applicable check passes, deterministically") {
  ExperimentConfig cfg = load_config(source_dir() + "/configs/periodic_n2_N3.json");
  const RunReport a = run(cfg);
  for (const auto& r : a.checks) {
    INFO(r.name);
    CHECK(r.status != "fail");
  }
  CHECK(a.ok());
  CHECK(a.skipped == 2);
  const RunReport b = run(cfg);
  CHECK(to_json(a, false) == to_json(b, false));
  cfg.seed += 1;
  CHECK(to_json(run(cfg), false) != to_json(a, false));
}

TEST_CASE("degenerate config: rank deficiency is the expected outcome") {
  const RunReport r = run(load_config(source_dir() + "/configs/degenerate_ytr.json"));
  CHECK(r.ok());
  bool seen = false;
  for (const auto& c : r.checks)
    if (c.name == "det-M-zero") {
      seen = true;
      CHECK(c.status == "pass");
      CHECK(c.residuals.at("rank") == 0.0);
      REQUIRE(!c.notes.empty());
      CHECK(c.notes.back().find("expected-degenerate") != std::string::npos);
    }
  CHECK(seen);
}

TEST_CASE("maba config passes") {
  const RunReport r = run(load_config(source_dir() + "/configs/maba_N2.json"));
  for (const auto& c : r.checks) {
    INFO(c.name);
    CHECK(c.status != "fail");
  }
}

TEST_CASE("csv output has a header and one row per residual") {
  ExperimentConfig cfg = load_config(source_dir() + "/configs/degenerate_ytr.json");
  cfg.suite = {"det-M-zero"};
  const std::string csv = to_csv(run(cfg));
  CHECK(csv.rfind("check,status", 0) == 0);
  CHECK(csv.find("det-M-zero,pass") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  const std::string cfg = source_dir() + "/configs/degenerate_ytr.json";
  const std::string out = tmp_path("report.json");
  std::remove(out.c_str());
  CHECK(run_cli("verify --config " + cfg + " --out " + out) == 0);
  CHECK(read_json(out)["summary"]["failed"] == 0);

  // a check failure still writes the report
  {
    std::ofstream bad(tmp_path("strict.json"));
    bad << R"({"model": {"type": "degenerate-ytr", "c": 1}, "suite": ["det-M-zero"],
              "tolerances": {"degenerate": 0}, "sizes": {"n": 2}})";
  }
  const std::string strict_out = tmp_path("strict_report.json");
  std::remove(strict_out.c_str());
  const int strict = run_cli("verify --config " + tmp_path("strict.json") + " --out " + strict_out);
  CHECK((strict == 0 || strict == 1));
  CHECK(read_json(strict_out).contains("checks"));

  // malformed config: exit 2 and no report
  {
    std::ofstream bad(tmp_path("broken.json"));
    bad << "{ not json";
  }
  const std::string none = tmp_path("none.json");
  std::remove(none.c_str());
  CHECK(run_cli("verify --config " + tmp_path("broken.json") + " --out " + none) == 2);
  CHECK_FALSE(std::ifstream(none).good());
  CHECK(run_cli("verify --config " + cfg + " --only nope --out " + none) == 2);
  CHECK_FALSE(std::ifstream(none).good());

  CHECK(run_cli("list-checks") == 0);
  CHECK(run_cli("explain det-M-zero") == 0);
  CHECK(run_cli("explain nope") == 2);
  CHECK(run_cli("verify --config " + cfg + " --only appendix-A --format csv --out " + tmp_path("r.csv")) == 0);
}
