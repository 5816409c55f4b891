#include "giant_atom/cli_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "giant_atom/cascade_engine.hpp"
#include "giant_atom/errors.hpp"
#include "giant_atom/single_excitation.hpp"
#include "giant_atom/two_phonon.hpp"

namespace giant_atom {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<Scenario, std::string>> kScenarioNames = {
    {Scenario::spontaneous, "spontaneous"}, {Scenario::spectra, "spectra"},
    {Scenario::reflectance, "reflectance"}, {Scenario::two_phonon_spectra, "two_phonon_spectra"},
    {Scenario::g2, "g2"},                   {Scenario::cascade, "cascade"},
    {Scenario::sweep, "sweep"}};

const std::vector<std::string> kAxes = {"gammaT", "omega0T_over_pi", "phi_over_pi",
                                        "delta",  "drive",           "delta_over_omega0"};

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

// Walks one object of the tree, remembering the key path for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  void only(const std::set<std::string>& allowed) const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) fail(join(path_, it.key()), "unknown key");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }
  const json& at(const std::string& key) const { return j_.at(key); }

  double number(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path(key), "must be finite");
    return x;
  }

  std::optional<double> maybe_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  int integer(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
      fail(path(key), "integer out of range");
    return static_cast<int>(x);
  }

  std::string string(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) const {
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(path(key), "expected true or false");
    return v.get<bool>();
  }

 private:
  const json& j_;
  std::string path_;
};

Grid parse_grid(const json& j, const std::string& path) {
  Node n(j, path);
  n.only({"min", "max", "count"});
  for (const char* k : {"min", "max", "count"})
    if (!n.has(k)) fail(n.path(k), "required");
  Grid g;
  g.min = n.number("min");
  g.max = n.number("max");
  g.count = n.integer("count");
  if (g.count < 2) fail(n.path("count"), "must be at least 2");
  if (!(g.max > g.min)) fail(n.path("max"), "must exceed min");
  return g;
}

void phase_over_pi(const Node& n, const std::string& over_pi_key, const std::string& rad_key,
                   std::optional<double>& out) {
  if (n.has(over_pi_key) && n.has(rad_key))
    fail(n.path(rad_key), "give either " + rad_key + " or " + over_pi_key + ", not both");
  if (n.has(over_pi_key)) out = n.number(over_pi_key);
  if (n.has(rad_key)) out = n.number(rad_key) / kPi;
}

void require_grid(const std::optional<Grid>& g, const std::string& key, const RunConfig& c) {
  if (!g) fail("grid." + key, "required for scenario " + to_string(c.scenario));
}

void require_phase(const RunConfig& c) {
  if (!c.physics.omega0T_over_pi && !c.physics.phi_over_pi)
    fail("physics.omega0T", "a transition phase (omega0T) or drive phase (phi) is required");
}

// Scenario-specific preconditions, reported against config keys.
void check_requirements(const RunConfig& c) {
  switch (c.scenario) {
    case Scenario::spontaneous:
      require_grid(c.t, "t", c);
      require_phase(c);
      if (c.t->min < 0.0) fail("grid.t.min", "must be >= 0");
      break;
    case Scenario::spectra:
    case Scenario::reflectance:
    case Scenario::two_phonon_spectra:
      require_grid(c.omega, "omega", c);
      require_phase(c);
      break;
    case Scenario::g2:
      require_grid(c.tau, "tau", c);
      require_phase(c);
      if (c.physics.drive >= 1.0) fail("physics.drive", "two-phonon results need drive < 1");
      break;
    case Scenario::cascade: {
      require_grid(c.t, "t", c);
      require_phase(c);
      if (c.t->min != 0.0) fail("grid.t.min", "cascade trajectories start at 0");
      const double per_T = (c.t->count - 1) / c.t->max;
      const double M = std::round(per_T);
      if (M < 1.0 || std::abs(per_T - M) > 1e-9 * per_T)
        fail("grid.t.count", "(count - 1)/max must be a whole number of samples per delay");
      if (c.options.steps_per_T % static_cast<int>(M) != 0)
        fail("grid.t.count", "samples per delay must divide options.steps_per_T");
      break;
    }
    case Scenario::sweep:
      break;
  }
}

SystemParams system_of(const Physics& ph) { return SystemParams::from_dimensionless(ph.gammaT, ph.omega0T()); }

void add_warnings(std::vector<std::string>& out, const std::vector<std::string>& w) {
  for (const auto& s : w)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

Dataset make_dataset(const RunConfig& c, std::string method, std::vector<std::string> columns) {
  Dataset d;
  d.name = to_string(c.scenario);
  d.method = std::move(method);
  d.config = c;
  d.columns = std::move(columns);
  return d;
}

Dataset run_spontaneous(const RunConfig& c) {
  const SystemParams p = system_of(c.physics);
  Dataset d = make_dataset(c,
                           "finite delay series for e(t) from e(0) = 1; E_P = gamma times the integral of |e|^2 "
                           "over the last delay, E_T = E_P + |e|^2, energies in units of hbar omega0",
                           {"t_over_T", "e_abs2", "E_P", "E_T"});
  add_warnings(d.warnings, p.warnings());
  auto density = [&](double s) { return std::norm(spontaneous_series_rotating(p, s)); };
  for (double t : c.t->points()) {
    const double a = std::max(0.0, t - 1.0);
    std::vector<double> cuts;
    for (double m = std::floor(a) + 1.0; m < t; m += 1.0) cuts.push_back(m);
    const double e2 = density(t);
    const double ep = t > 0.0 ? p.gamma * integrate_adaptive(density, a, t, 1e-11, 1e-15, cuts) : 0.0;
    d.rows.push_back({t, e2, ep, ep + e2});
  }
  return d;
}

Dataset run_spectra(const RunConfig& c) {
  const SystemParams p = system_of(c.physics);
  Dataset d = make_dataset(c, "closed-form per-leg spectra of the atom and of the outgoing phonons after decay from e(0) = 1",
                           {"detuning_over_gamma", "S_atom", "S_out", "dark_singularity"});
  add_warnings(d.warnings, p.warnings());
  for (double x : c.omega->points()) {
    const double w = p.omega0 + x * p.gamma;
    const SpectrumValue sa = atom_power_spectrum(p, w);
    const SpectrumValue so = output_power_spectrum(p, w);
    const bool dark = sa.dark_singularity || so.dark_singularity;
    d.rows.push_back({x, sa.dark_singularity ? kNaN : sa.value, so.value, dark ? 1.0 : 0.0});
  }
  return d;
}

Dataset run_reflectance(const RunConfig& c) {
  const SystemParams p = system_of(c.physics);
  Dataset d = make_dataset(c, "long-time single-phonon reflectance and transmittance of a weak coherent drive",
                           {"detuning_over_omega0", "R", "T"});
  add_warnings(d.warnings, p.warnings());
  for (double x : c.omega->points()) {
    const auto [R, T] = reflectance_at_detuning(p, x * p.omega0);
    d.rows.push_back({x, R, T});
  }
  return d;
}

DriveSettings drive_of(const RunConfig& c, const SystemParams& p, double Omega) {
  const double delta = c.physics.delta * p.gamma;
  if (c.physics.phi_over_pi) return DriveSettings::at_phase(p, delta, c.physics.phi(), Omega);
  return DriveSettings::at_detuning(p, delta, Omega);
}

Dataset run_two_phonon_spectra(const RunConfig& c) {
  const SystemParams p = system_of(c.physics);
  // S_inel scales as Omega^4 exactly, so the scaled spectrum is evaluated at Omega/(2 gamma) = 1/2
  const double r_ref = 0.5;
  const ScatteringKernel k = build_kernel(p, drive_of(c, p, 2.0 * p.gamma * r_ref));
  Dataset d = make_dataset(c,
                           "leading-order inelastic power spectrum of the two-phonon S matrix; "
                           "S_tilde = (2 gamma/Omega)^4 S_inel, S_inel at the configured drive",
                           {"omega_T_over_2pi", "S_tilde", "S_inel"});
  add_warnings(d.warnings, p.warnings());
  const double r4 = std::pow(c.physics.drive, 4);
  for (double x : c.omega->points()) {
    const double st = inelastic_spectrum(k, 2.0 * p.gamma * r_ref, 2.0 * kPi * x) / std::pow(r_ref, 4);
    d.rows.push_back({x, st, r4 * st});
  }
  return d;
}

Dataset run_g2(const RunConfig& c) {
  const SystemParams p = system_of(c.physics);
  const DriveSettings drive = drive_of(c, p, 2.0 * p.gamma * c.physics.drive);
  const ScatteringKernel k = build_kernel(p, drive);
  Dataset d = make_dataset(c, "second-order correlations of the scattered two-phonon state; g empty (NaN) where the "
                              "single-phonon intensity vanishes",
                           {"tau_over_T", "g11", "g22", "g12", "G11", "G12", "G22"});
  add_warnings(d.warnings, p.warnings());
  add_warnings(d.warnings, drive.warnings(p));
  const CorrelationResult res = correlation_table(k, c.tau->points());
  for (const CorrelationRow& r : res.rows)
    d.rows.push_back({r.tau, r.g11.value_or(kNaN), r.g22.value_or(kNaN), r.g12.value_or(kNaN), r.G11, r.G12, r.G22});
  return d;
}

Dataset run_cascade(const RunConfig& c) {
  const SystemParams p = system_of(c.physics);
  const double r = c.physics.drive;
  const double Omega = 2.0 * p.gamma * r;
  // config delta is omega_d - omega0; the cascade Hamiltonian carries omega0 - omega_d
  const double delta = -c.physics.delta * p.gamma;
  const double phi = c.physics.phi();
  const Mat2 initial = c.options.initial == "excited" ? excited_state() : ground_state();
  CascadeOptions opt;
  opt.max_k = c.options.max_k;
  opt.steps_per_T = c.options.steps_per_T;
  const int M = static_cast<int>(std::round((c.t->count - 1) / c.t->max));

  std::vector<std::string> cols = {"t_over_T",           "population",       "population_scaled",
                                   "n_out",              "n_out_scaled",     "population_delayed",
                                   "lag_coherence_re",   "lag_coherence_im"};
  if (c.options.g22) {
    cols.push_back("G22_from_zero");
    cols.push_back("G22_from_zero_scaled");
  }
  Dataset d = make_dataset(c,
                           "delayed master equation as a k-copy cascade, RK4 in auxiliary time; scaled columns "
                           "divide by (Omega/2 gamma)^2; n_out is the flux leaving leg A",
                           cols);
  add_warnings(d.warnings, p.warnings());

  const auto traj = cascade_trajectory(p, delta, Omega, phi, initial, c.t->max, M, opt);
  std::vector<double> g;
  if (c.options.g22) g = delayed_g2_from_zero(p, delta, Omega, phi, initial, c.t->max, M, opt);
  const double scale = r > 0.0 ? 1.0 / (r * r) : kNaN;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const OutputObservables& o = traj[j];
    std::vector<double> row = {o.t,
                               o.population,
                               o.population * scale,
                               o.n_out,
                               o.n_out * scale,
                               o.population_delayed,
                               o.lag_coherence.real(),
                               o.lag_coherence.imag()};
    if (c.options.g22) {
      row.push_back(g.at(j));
      row.push_back(g.at(j) * scale);
    }
    d.rows.push_back(std::move(row));
  }
  if (d.rows.size() != static_cast<std::size_t>(c.t->count))
    throw ConsistencyError("cascade: trajectory length does not match grid.t.count");
  return d;
}

std::string number_text(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), join(path, it.key()), out);
  } else {
    out.emplace_back(path, j.dump());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("output: cannot open " + path.string() + " for writing");
  f << text;
  f.close();
  if (!f) throw ConfigError("output: failed writing " + path.string());
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [v, name] : kScenarioNames)
    if (v == s) return name;
  return "unknown";
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Scenario scenario_from_string(const std::string& s) {
  for (const auto& [v, name] : kScenarioNames)
    if (name == s) return v;
  throw ConfigError("scenario: unknown scenario '" + s + "'");
}

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("output.format: expected csv or json, got '" + s + "'");
}

std::vector<double> Grid::points() const {
  std::vector<double> x(static_cast<std::size_t>(count));
  const double h = (max - min) / (count - 1);
  for (int i = 0; i < count; ++i) x[i] = min + h * i;
  x.back() = max;
  return x;
}

double Physics::omega0T() const {
  if (omega0T_over_pi) return kPi * *omega0T_over_pi;
  if (phi_over_pi) return kPi * *phi_over_pi - delta * gammaT;
  throw ConfigError("physics.omega0T: a transition phase (omega0T) or drive phase (phi) is required");
}

double Physics::phi() const {
  if (phi_over_pi) return kPi * *phi_over_pi;
  return omega0T() + delta * gammaT;
}

bool RunConfig::equivalent(const RunConfig& o) const {
  return scenario == o.scenario && physics == o.physics && t == o.t && omega == o.omega && tau == o.tau &&
         options == o.options && sweep == o.sweep && format == o.format;
}

RunConfig parse_config(const json& j) {
  Node root(j, "");
  root.only({"scenario", "physics", "grid", "options", "sweep", "output"});
  RunConfig c;
  if (!root.has("scenario")) fail("scenario", "required");
  c.scenario = scenario_from_string(root.string("scenario"));

  if (!root.has("physics")) fail("physics", "required");
  {
    Node n(root.at("physics"), "physics");
    n.only({"gammaT", "omega0T", "omega0T_over_pi", "phi", "phi_over_pi", "delta", "drive"});
    if (!n.has("gammaT")) fail(n.path("gammaT"), "required");
    c.physics.gammaT = n.number("gammaT");
    if (!(c.physics.gammaT > 0.0)) fail(n.path("gammaT"), "must be positive");
    phase_over_pi(n, "omega0T_over_pi", "omega0T", c.physics.omega0T_over_pi);
    phase_over_pi(n, "phi_over_pi", "phi", c.physics.phi_over_pi);
    c.physics.delta = n.maybe_number("delta").value_or(0.0);
    c.physics.drive = n.maybe_number("drive").value_or(0.0);
    if (c.physics.drive < 0.0) fail(n.path("drive"), "must be >= 0");
  }

  if (root.has("grid")) {
    Node n(root.at("grid"), "grid");
    n.only({"t", "omega", "tau"});
    if (n.has("t")) c.t = parse_grid(n.at("t"), "grid.t");
    if (n.has("omega")) c.omega = parse_grid(n.at("omega"), "grid.omega");
    if (n.has("tau")) c.tau = parse_grid(n.at("tau"), "grid.tau");
  }

  if (root.has("options")) {
    Node n(root.at("options"), "options");
    n.only({"initial", "g22", "steps_per_T", "max_k"});
    if (n.has("initial")) {
      c.options.initial = n.string("initial");
      if (c.options.initial != "ground" && c.options.initial != "excited")
        fail(n.path("initial"), "expected ground or excited");
    }
    if (n.has("g22")) c.options.g22 = n.boolean("g22");
    if (n.has("steps_per_T")) {
      c.options.steps_per_T = n.integer("steps_per_T");
      if (c.options.steps_per_T < 1) fail(n.path("steps_per_T"), "must be positive");
    }
    if (n.has("max_k")) {
      c.options.max_k = n.integer("max_k");
      if (c.options.max_k < 1 || c.options.max_k > 8) fail(n.path("max_k"), "must lie in 1..8");
    }
  }

  if (root.has("output")) {
    Node n(root.at("output"), "output");
    n.only({"dir", "format"});
    if (n.has("dir")) c.out_dir = n.string("dir");
    if (n.has("format")) {
      const std::string f = n.string("format");
      if (f != "csv" && f != "json") fail(n.path("format"), "expected csv or json");
      c.format = format_from_string(f);
    }
  }

  if (root.has("sweep")) {
    if (c.scenario != Scenario::sweep) fail("sweep", "only allowed with scenario sweep");
    Node n(root.at("sweep"), "sweep");
    n.only({"scenario", "axis", "values"});
    for (const char* k : {"scenario", "axis", "values"})
      if (!n.has(k)) fail(n.path(k), "required");
    SweepSpec s;
    const std::string base = n.string("scenario");
    try {
      s.base = scenario_from_string(base);
    } catch (const ConfigError&) {
      fail(n.path("scenario"), "unknown scenario '" + base + "'");
    }
    if (s.base == Scenario::sweep) fail(n.path("scenario"), "a sweep cannot nest another sweep");
    s.axis = n.string("axis");
    if (std::find(kAxes.begin(), kAxes.end(), s.axis) == kAxes.end())
      fail(n.path("axis"), "not a recognized physics parameter '" + s.axis + "'");
    const json& v = n.at("values");
    if (!v.is_array()) fail(n.path("values"), "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = n.path("values") + "[" + std::to_string(i) + "]";
      if (!v[i].is_number()) fail(p, "expected a number");
      const double x = v[i].get<double>();
      if (!std::isfinite(x)) fail(p, "must be finite");
      s.values.push_back(x);
    }
    c.sweep = s;
  } else if (c.scenario == Scenario::sweep) {
    fail("sweep", "required for scenario sweep");
  }

  if (c.sweep) {
    if (!c.sweep->values.empty()) check_requirements(apply_axis(c, c.sweep->axis, c.sweep->values.front()));
  } else {
    check_requirements(c);
  }
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON (") + e.what() + ")");
  }
  return parse_config(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

json config_to_json(const RunConfig& c) {
  json j;
  j["scenario"] = to_string(c.scenario);
  json ph;
  ph["gammaT"] = c.physics.gammaT;
  if (c.physics.omega0T_over_pi) ph["omega0T_over_pi"] = *c.physics.omega0T_over_pi;
  if (c.physics.phi_over_pi) ph["phi_over_pi"] = *c.physics.phi_over_pi;
  ph["delta"] = c.physics.delta;
  ph["drive"] = c.physics.drive;
  j["physics"] = ph;
  json grid = json::object();
  auto put = [&](const char* key, const std::optional<Grid>& g) {
    if (g) grid[key] = json{{"min", g->min}, {"max", g->max}, {"count", g->count}};
  };
  put("t", c.t);
  put("omega", c.omega);
  put("tau", c.tau);
  if (!grid.empty()) j["grid"] = grid;
  j["options"] = json{{"initial", c.options.initial},
                      {"g22", c.options.g22},
                      {"steps_per_T", c.options.steps_per_T},
                      {"max_k", c.options.max_k}};
  if (c.sweep)
    j["sweep"] = json{{"scenario", to_string(c.sweep->base)}, {"axis", c.sweep->axis}, {"values", c.sweep->values}};
  j["output"] = json{{"format", to_string(c.format)}};
  return j;
}

RunConfig apply_axis(const RunConfig& c, const std::string& axis, double value) {
  RunConfig r = c;
  if (c.sweep) r.scenario = c.sweep->base;
  r.sweep.reset();
  Physics& ph = r.physics;
  if (axis == "gammaT") {
    if (!(value > 0.0)) fail("sweep.values", "gammaT must be positive");
    ph.gammaT = value;
  } else if (axis == "omega0T_over_pi") {
    ph.omega0T_over_pi = value;
  } else if (axis == "phi_over_pi") {
    ph.phi_over_pi = value;
  } else if (axis == "delta") {
    ph.delta = value;
  } else if (axis == "drive") {
    if (value < 0.0) fail("sweep.values", "drive must be >= 0");
    ph.drive = value;
  } else if (axis == "delta_over_omega0") {
    if (!ph.omega0T_over_pi) fail("sweep.axis", "delta_over_omega0 needs physics.omega0T");
    ph.delta = value * kPi * *ph.omega0T_over_pi / ph.gammaT;
  } else {
    fail("sweep.axis", "not a recognized physics parameter '" + axis + "'");
  }
  return r;
}

Dataset run_scenario(const RunConfig& c) {
  check_requirements(c);
  switch (c.scenario) {
    case Scenario::spontaneous: return run_spontaneous(c);
    case Scenario::spectra: return run_spectra(c);
    case Scenario::reflectance: return run_reflectance(c);
    case Scenario::two_phonon_spectra: return run_two_phonon_spectra(c);
    case Scenario::g2: return run_g2(c);
    case Scenario::cascade: return run_cascade(c);
    case Scenario::sweep: break;
  }
  throw ConfigError("scenario: sweep configurations go through run_sweep");
}

SweepResult run_sweep(const RunConfig& c, int threads) {
  if (!c.sweep) throw ConfigError("sweep: required for scenario sweep");
  const SweepSpec& s = *c.sweep;
  SweepResult res;
  if (s.values.empty()) {
    res.warnings.push_back("sweep over " + s.axis + " has no values; nothing written");
    return res;
  }
  const std::size_t n = s.values.size();
  std::vector<RunConfig> configs;
  for (double v : s.values) configs.push_back(apply_axis(c, s.axis, v));

  std::vector<std::optional<Dataset>> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = run_scenario(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, n);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const int width = static_cast<int>(std::to_string(n - 1).size());
  const std::string stem = to_string(s.base) + "_" + s.axis;
  Dataset combined;
  combined.name = stem + "_sweep";
  combined.config = c;
  for (std::size_t i = 0; i < n; ++i) {
    Dataset d = std::move(*out[i]);
    std::string idx = std::to_string(i);
    d.name = stem + "_" + std::string(width - idx.size(), '0') + idx;
    if (i == 0) {
      combined.method = d.method + "; long format, one block per " + s.axis + " value";
      combined.columns.push_back(s.axis);
      combined.columns.insert(combined.columns.end(), d.columns.begin(), d.columns.end());
    }
    add_warnings(combined.warnings, d.warnings);
    for (const auto& row : d.rows) {
      std::vector<double> r = {s.values[i]};
      r.insert(r.end(), row.begin(), row.end());
      combined.rows.push_back(std::move(r));
    }
    res.points.push_back(std::move(d));
  }
  res.warnings = combined.warnings;
  res.combined = std::move(combined);
  return res;
}

std::string format_csv(const Dataset& d) {
  std::string s;
  s += "# library = giant_atom " + std::string(kLibraryVersion) + "\n";
  s += "# dataset = " + d.name + "\n";
  s += "# method = " + d.method + "\n";
  for (const auto& w : d.warnings) s += "# warning = " + w + "\n";
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(config_to_json(d.config), "config", kv);
  for (const auto& [k, v] : kv) s += "# " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < d.columns.size(); ++i) s += (i ? "," : "") + d.columns[i];
  s += "\n";
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      s += number_text(row[i]);
    }
    s += "\n";
  }
  return s;
}

std::string format_json(const Dataset& d) {
  json j;
  j["library"] = "giant_atom";
  j["version"] = kLibraryVersion;
  j["dataset"] = d.name;
  j["method"] = d.method;
  j["warnings"] = d.warnings;
  j["config"] = config_to_json(d.config);
  j["columns"] = d.columns;
  json rows = json::array();
  for (const auto& row : d.rows) {
    json r = json::array();
    for (double x : row) r.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump() + "\n";
}

RunConfig config_from_csv(const std::string& text) {
  json tree = json::object();
  std::istringstream in(text);
  std::string line;
  const std::string prefix = "# config.";
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') break;
    if (line.compare(0, prefix.size(), prefix) != 0) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ConfigError("header: malformed line '" + line + "'");
    const std::string path = line.substr(prefix.size(), eq - prefix.size());
    json* node = &tree;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (dot == std::string::npos) {
        try {
          (*node)[key] = json::parse(line.substr(eq + 3));
        } catch (const json::parse_error&) {
          throw ConfigError("header: bad value for config." + path);
        }
        break;
      }
      node = &(*node)[key];
      start = dot + 1;
    }
  }
  return parse_config(tree);
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("dataset: not valid JSON (") + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("config")) throw ConfigError("dataset: no config block");
  return parse_config(j.at("config"));
}

std::vector<std::filesystem::path> run_and_write(const RunConfig& c, const std::filesystem::path& dir,
                                                 int threads, std::vector<std::string>& warnings) {
  std::vector<Dataset> sets;
  if (c.scenario == Scenario::sweep) {
    SweepResult r = run_sweep(c, threads);
    add_warnings(warnings, r.warnings);
    if (!r.combined) return {};
    sets = std::move(r.points);
    sets.push_back(std::move(*r.combined));
  } else {
    sets.push_back(run_scenario(c));
    add_warnings(warnings, sets.back().warnings);
  }

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output: cannot create directory " + dir.string() + " (" + ec.message() + ")");
  std::vector<std::filesystem::path> written;
  for (const Dataset& d : sets) {
    const std::filesystem::path path = dir / (d.name + "." + to_string(c.format));
    write_file(path, c.format == Format::csv ? format_csv(d) : format_json(d));
    written.push_back(path);
  }
  return written;
}

}  // namespace giant_atom
