#include "rydpol/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace rydpol {
namespace {

constexpr double kPi = 3.14159265358979323846;

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

double parse_number(const std::string& text, size_t& pos) {
  size_t consumed = 0;
  double value;
  try {
    value = std::stod(text.substr(pos), &consumed);
  } catch (const std::exception&) {
    bad("cannot parse number in '" + text + "'");
  }
  pos += consumed;
  return value;
}

double si_prefix(char c, bool& used) {
  used = true;
  switch (c) {
    case 'u': return 1e-6;
    case 'm': return 1e-3;
    case 'k': return 1e3;
    case 'M': return 1e6;
    case 'G': return 1e9;
    case 'T': return 1e12;
    default: used = false; return 1.0;
  }
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) bad("unknown key '" + it.key() + "' in " + where);
  }
}

double freq_field(const json& v, const std::string& where) {
  if (v.is_string()) return parse_frequency(v.get<std::string>());
  bad(where + " must be a frequency string with a unit tag (e.g. \"10MHz\", \"6.3e7rad/s\")");
}

}  // namespace

double parse_frequency(const std::string& raw) {
  const std::string text = strip_spaces(raw);
  size_t pos = 0;
  double value = parse_number(text, pos);
  std::string unit = text.substr(pos);
  if (unit == "rad/s") return value;
  if (unit.size() >= 2 && unit.substr(unit.size() - 2) == "Hz") {
    std::string prefix = unit.substr(0, unit.size() - 2);
    double mult = 1.0;
    if (prefix.size() == 1) {
      bool used = false;
      mult = si_prefix(prefix[0], used);
      if (!used) bad("unknown SI prefix '" + prefix + "' in '" + raw + "'");
    } else if (!prefix.empty()) {
      bad("unknown SI prefix '" + prefix + "' in '" + raw + "'");
    }
    return 2.0 * kPi * value * mult;
  }
  bad("frequency '" + raw + "' needs an explicit unit tag (Hz with SI prefix, or rad/s)");
}

double parse_angle(const std::string& raw) {
  const std::string text = strip_spaces(raw);
  size_t pos = 0;
  double value = parse_number(text, pos);
  std::string unit = text.substr(pos);
  if (unit.empty() || unit == "deg") return value * kPi / 180.0;
  if (unit == "rad") return value;
  bad("angle '" + raw + "' has unknown unit '" + unit + "'");
}

std::vector<double> parse_angle_grid(const std::string& raw) {
  const std::string text = strip_spaces(raw);
  size_t c1 = text.find(':');
  if (c1 == std::string::npos) return {parse_angle(text) * 180.0 / kPi};
  size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) bad("angle grid must be start:stop:step");
  double start = std::stod(text.substr(0, c1));
  double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(text.substr(c2 + 1));
  if (step <= 0.0 || stop < start) bad("angle grid must have stop >= start and step > 0");
  std::vector<double> out;
  for (double t = start; t <= stop + 1e-9 * step; t += step) out.push_back(t);
  return out;
}

std::vector<double> parse_frequency_grid(const std::string& raw) {
  const std::string text = strip_spaces(raw);
  size_t c1 = text.find(':');
  if (c1 == std::string::npos) return {parse_frequency(text)};
  size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) bad("frequency grid must be start:stop:count");
  double start = parse_frequency(text.substr(0, c1));
  double stop = parse_frequency(text.substr(c1 + 1, c2 - c1 - 1));
  long count = std::stol(text.substr(c2 + 1));
  if (count < 2) bad("frequency grid needs at least 2 points");
  std::vector<double> out(count);
  for (long k = 0; k < count; ++k)
    out[k] = start + (stop - start) * double(k) / double(count - 1);
  return out;
}

void SimulationConfig::apply_default_grids() {
  if (theta_grid_deg.empty())
    theta_grid_deg = parse_angle_grid("0:355:5");
  if (detuning_grid.empty()) {
    double split = std::sqrt(rf_rabi * rf_rabi + rf_detuning * rf_detuning);
    double span = 4.0 * std::max(split, 2.0 * kPi * 1.0e6);
    detuning_grid.resize(201);
    for (int k = 0; k < 201; ++k)
      detuning_grid[k] = -span + 2.0 * span * k / 200.0;
  }
}

void SimulationConfig::validate() const {
  preset(preset_name);  // throws on unknown names
  if (probe.radial_rabi <= 0.0) bad("probe Rabi frequency must be > 0");
  if (coupling.radial_rabi < 0.0 || rf_rabi < 0.0) bad("Rabi frequencies must be >= 0");
  rates.validate();
  vapor.validate();
}

SimulationConfig parse_config_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("config root must be a JSON object");
  check_keys(doc, "config root",
             {"preset", "probe", "coupling", "rf", "rates", "vapor", "sweep"});

  SimulationConfig cfg;
  if (doc.contains("preset")) cfg.preset_name = doc["preset"].get<std::string>();

  auto field = [&](const char* name, double& rabi, double& detuning) {
    if (!doc.contains(name)) return;
    const json& f = doc[name];
    check_keys(f, std::string(name) + " section", {"rabi", "detuning"});
    if (f.contains("rabi")) rabi = freq_field(f["rabi"], std::string(name) + ".rabi");
    if (f.contains("detuning"))
      detuning = freq_field(f["detuning"], std::string(name) + ".detuning");
  };
  field("probe", cfg.probe.radial_rabi, cfg.probe.detuning);
  field("coupling", cfg.coupling.radial_rabi, cfg.coupling.detuning);
  field("rf", cfg.rf_rabi, cfg.rf_detuning);

  if (doc.contains("rates")) {
    const json& r = doc["rates"];
    check_keys(r, "rates section",
               {"gamma_i", "gamma_transit", "gamma_collision", "gamma_r1_rad",
                "gamma_r2_rad", "gamma_dummy"});
    auto rate = [&](const char* k, double& target) {
      if (r.contains(k)) target = freq_field(r[k], std::string("rates.") + k);
    };
    rate("gamma_i", cfg.rates.gamma_i);
    rate("gamma_transit", cfg.rates.gamma_transit);
    rate("gamma_collision", cfg.rates.gamma_collision);
    rate("gamma_r1_rad", cfg.rates.gamma_r1_rad);
    rate("gamma_r2_rad", cfg.rates.gamma_r2_rad);
    rate("gamma_dummy", cfg.rates.gamma_dummy);
  }

  if (doc.contains("vapor")) {
    const json& v = doc["vapor"];
    check_keys(v, "vapor section",
               {"density", "path_length", "temperature", "lambda_probe",
                "lambda_coupling", "atom_mass", "probe_dipole"});
    auto num = [&](const char* k, double& target) {
      if (v.contains(k)) target = v[k].get<double>();
    };
    num("density", cfg.vapor.density);
    num("path_length", cfg.vapor.path_length);
    num("temperature", cfg.vapor.temperature);
    num("lambda_probe", cfg.vapor.lambda_probe);
    num("lambda_coupling", cfg.vapor.lambda_coupling);
    num("atom_mass", cfg.vapor.atom_mass);
    num("probe_dipole", cfg.vapor.probe_dipole);
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_keys(s, "sweep section",
               {"theta", "detuning", "doppler", "velocity_points", "workers",
                "fold_symmetry", "fast_solver"});
    if (s.contains("theta")) cfg.theta_grid_deg = parse_angle_grid(s["theta"].get<std::string>());
    if (s.contains("detuning"))
      cfg.detuning_grid = parse_frequency_grid(s["detuning"].get<std::string>());
    if (s.contains("doppler")) cfg.sweep.doppler = s["doppler"].get<bool>();
    if (s.contains("velocity_points"))
      cfg.sweep.velocity_points = s["velocity_points"].get<int>();
    if (s.contains("workers")) cfg.sweep.workers = s["workers"].get<int>();
    if (s.contains("fold_symmetry")) cfg.sweep.fold_symmetry = s["fold_symmetry"].get<bool>();
    if (s.contains("fast_solver")) cfg.sweep.fast_solver = s["fast_solver"].get<bool>();
  }
  return cfg;
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_schema() {
  return R"(Configuration file: JSON object. Unknown keys are rejected.

Unit conventions:
  frequencies  strings with an explicit unit tag:
                 "<x>Hz" (SI prefixes u, m, k, M, G, T) -- ordinary frequency,
                 stored internally as angular frequency (multiplied by 2*pi);
                 "<x>rad/s" -- angular frequency taken verbatim.
  angles       degrees by default; "rad"/"deg" suffixes accepted.
  angle grid   "start:stop:step" in degrees, inclusive.
  freq grid    "start:stop:count", endpoints unit-tagged, count >= 2.
  vapor        plain SI numbers (m, K, kg, C*m, atoms/m^3).

Keys:
  preset            ladder preset: "type1" | "type2" | "model_atom"
  probe.rabi        probe Rabi frequency of the strongest pi line (required > 0)
  probe.detuning    probe detuning (default "0Hz")
  coupling.rabi     coupling Rabi frequency (default "0Hz")
  coupling.detuning base coupling detuning added to the sweep axis
  rf.rabi           RF Rabi frequency of the strongest mJ column
  rf.detuning       RF detuning from the Rydberg pair resonance
  rates.gamma_i          intermediate-state radiative rate (default "6.07MHz")
  rates.gamma_transit    transit dephasing rate
  rates.gamma_collision  collision rate
  rates.gamma_r1_rad     lower Rydberg radiative rate
  rates.gamma_r2_rad     upper Rydberg radiative rate
  rates.gamma_dummy      recycling rate (default: 1000x the largest other rate)
  vapor.density, vapor.path_length, vapor.temperature,
  vapor.lambda_probe, vapor.lambda_coupling, vapor.atom_mass,
  vapor.probe_dipole
  sweep.theta       angle grid (default "0:355:5")
  sweep.detuning    coupling-detuning grid (default: +-4x dressed splitting, 201 pts)
  sweep.doppler     true/false (default true)
  sweep.velocity_points   Doppler grid size (default 41)
  sweep.workers     thread count; 0 = auto (RYDPOL_WORKERS env or hardware)
  sweep.fold_symmetry     reuse theta -> -theta, theta+180 equivalences (default true)
  sweep.fast_solver       spectral steady-state solver with direct fallback (default true)
)";
}

}  // namespace rydpol
