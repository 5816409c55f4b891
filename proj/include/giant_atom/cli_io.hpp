#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace giant_atom {

inline constexpr const char* kLibraryVersion = "1.0.0";
/// Default output directory when neither --out nor output.dir is given.
inline constexpr const char* kOutputDirEnv = "GIANT_ATOM_OUT";

enum class Scenario { spontaneous, spectra, reflectance, two_phonon_spectra, g2, cascade, sweep };
enum class Format { csv, json };

std::string to_string(Scenario s);
std::string to_string(Format f);
/// ConfigError on an unknown name.
Scenario scenario_from_string(const std::string& s);
Format format_from_string(const std::string& s);

/// Uniform grid, count >= 2, finite ends.
struct Grid {
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  std::vector<double> points() const;
  bool operator==(const Grid&) const = default;
};

/// Dimensionless physics inputs, T = 1. Phases are stored in units of pi.
struct Physics {
  double gammaT = 1.0;
  std::optional<double> omega0T_over_pi;
  std::optional<double> phi_over_pi;  // omega_d T; follows omega0 T + delta T when absent
  double delta = 0.0;                 // delta / gamma
  double drive = 0.0;                 // Omega / (2 gamma)

  /// omega0 T; falls back to phi - delta T. ConfigError if neither phase is set.
  double omega0T() const;
  double phi() const;
  bool operator==(const Physics&) const = default;
};

struct Options {
  std::string initial = "ground";  // cascade start: ground | excited
  bool g22 = false;                // cascade: add G22(0, t) from the chosen start
  int steps_per_T = 2000;
  int max_k = 6;
  bool operator==(const Options&) const = default;
};

struct SweepSpec {
  Scenario base = Scenario::cascade;
  std::string axis;  // gammaT, omega0T_over_pi, phi_over_pi, delta, drive, delta_over_omega0
  std::vector<double> values;
  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  Scenario scenario = Scenario::spontaneous;
  Physics physics;
  std::optional<Grid> t, omega, tau;
  Options options;
  std::optional<SweepSpec> sweep;
  Format format = Format::csv;
  std::string out_dir;  // not part of the dataset header

  /// Equivalence for round trips; ignores out_dir.
  bool equivalent(const RunConfig& other) const;
};

/// Parse a configuration tree. Errors are ConfigError with the key path, e.g.
/// "physics.gammaT: expected a number".
RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, defaults included, without out_dir. parse_config inverts it.
nlohmann::ordered_json config_to_json(const RunConfig& c);

/// The config with one sweep axis set to value (scenario becomes the sweep base).
RunConfig apply_axis(const RunConfig& c, const std::string& axis, double value);

struct Dataset {
  std::string name;    // file stem
  std::string method;  // what generated the columns
  RunConfig config;
  std::vector<std::string> warnings;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // NaN marks an undefined entry
};

/// Runs one non-sweep scenario. Numerical errors propagate unchanged.
Dataset run_scenario(const RunConfig& c);

struct SweepResult {
  std::vector<Dataset> points;
  std::optional<Dataset> combined;  // long format, axis value first; empty for no values
  std::vector<std::string> warnings;
};

/// Points run on up to `threads` workers; results keep the order of the values.
SweepResult run_sweep(const RunConfig& c, int threads = 1);

std::string format_csv(const Dataset& d);
std::string format_json(const Dataset& d);

/// Recover the configuration recorded in an emitted dataset.
RunConfig config_from_csv(const std::string& text);
RunConfig config_from_json(const std::string& text);

/// Runs the configured scenario (or sweep) and writes the files into dir. Returns the paths written.
std::vector<std::filesystem::path> run_and_write(const RunConfig& c, const std::filesystem::path& dir,
                                                 int threads, std::vector<std::string>& warnings);

}  // namespace giant_atom
