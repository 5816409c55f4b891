// simulate <scenario> --config <path> [--out <dir>] [--format csv|json] [--threads N]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "giant_atom/cli_io.hpp"
#include "giant_atom/errors.hpp"

namespace ga = giant_atom;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

ga::RunConfig read_config(const std::string& path, const std::string& scenario) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ga::ConfigError("config: cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(ss.str());
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw ga::ConfigError(std::string("config: not valid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) throw ga::ConfigError("config: expected an object");
  ga::scenario_from_string(scenario);
  if (!j.contains("scenario")) {
    j["scenario"] = scenario;
  } else if (!j["scenario"].is_string() || j["scenario"].get<std::string>() != scenario) {
    throw ga::ConfigError("scenario: config names " + j["scenario"].dump() + " but the command line asks for " +
                          scenario);
  }
  return ga::parse_config(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Giant-atom simulations: run a scenario and write its dataset"};
  std::string scenario, config_path, out_dir, format;
  int threads = 1;
  app.add_option("scenario", scenario,
                 "spontaneous, spectra, reflectance, two_phonon_spectra, g2, cascade or sweep")
      ->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, std::string("output directory (default: output.dir, then $") + ga::kOutputDirEnv +
                                       ", then .)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "workers for sweep points")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExit;
  }

  try {
    ga::RunConfig cfg = read_config(config_path, scenario);
    if (!format.empty()) cfg.format = ga::format_from_string(format);
    std::string dir = out_dir;
    if (dir.empty()) dir = cfg.out_dir;
    if (dir.empty()) {
      const char* env = std::getenv(ga::kOutputDirEnv);
      dir = env && *env ? env : ".";
    }
    std::vector<std::string> warnings;
    const auto written = ga::run_and_write(cfg, dir, threads, warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& p : written) std::cout << p.string() << "\n";
    return 0;
  } catch (const ga::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const ga::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericExit;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericExit;
  }
}
