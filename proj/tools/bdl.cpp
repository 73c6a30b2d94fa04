// bdl: run verification suites from a JSON config.
//
//   bdl verify --config <path> [--only a,b] [--seed N] [--out <path>] [--format json|csv]
//   bdl list-checks
//   bdl explain <name>
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid config, 3 internal error.

#include "bdl/runner.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int verify(const std::string& config_path, const std::string& only, std::optional<std::uint64_t> seed,
           const std::string& out_path, const std::string& format) {
  bdl::ExperimentConfig cfg;
  try {
    cfg = bdl::load_config(config_path);
    if (!only.empty()) {
      cfg.suite.clear();
      for (const auto& name : split(only)) {
        if (!bdl::find_check(name)) throw bdl::ConfigError("--only: unknown check '" + name + "'");
        cfg.suite.push_back(name);
      }
    }
    if (seed) cfg.seed = *seed;
    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (cfg.format != "json" && cfg.format != "csv") throw bdl::ConfigError("--format: expected json or csv");
  } catch (const bdl::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }

  const bdl::RunReport report = bdl::run(cfg);
  const std::string text = cfg.format == "csv" ? bdl::to_csv(report) : bdl::to_json(report).dump(2) + "\n";
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
    out << text;
  }
  for (const auto& r : report.checks)
    std::cerr << r.status << ' ' << r.name << " (" << r.instances << " instances, " << static_cast<long>(r.wall_ms)
              << " ms)\n";
  std::cerr << report.passed << " passed, " << report.failed << " failed, " << report.skipped << " skipped\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalar-product determinant verification"};
  app.require_subcommand(1);

  std::string config_path, only, out_path, format;
  std::optional<std::uint64_t> seed;
  auto* v = app.add_subcommand("verify", "run the checks named by a config");
  v->add_option("--config", config_path, "config file")->required();
  v->add_option("--only", only, "comma-separated subset of checks");
  v->add_option("--seed", seed, "override the config seed");
  v->add_option("--out", out_path, "report path (stdout if omitted)");
  v->add_option("--format", format, "json or csv");

  app.add_subcommand("list-checks", "list the registered checks");

  std::string name;
  auto* e = app.add_subcommand("explain", "describe one check");
  e->add_option("name", name, "check name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*v) return verify(config_path, only, seed, out_path, format);
    if (app.got_subcommand("list-checks")) {
      std::cout << bdl::list_checks();
      return 0;
    }
    if (*e) {
      try {
        std::cout << bdl::explain(name);
      } catch (const std::invalid_argument& err) {
        std::cerr << err.what() << '\n';
        return 2;
      }
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return 3;
  }
  return 0;
}
