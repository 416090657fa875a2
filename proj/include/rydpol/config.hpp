#pragma once

#include <string>
#include <vector>

#include "rydpol/couplings.hpp"
#include "rydpol/master.hpp"
#include "rydpol/spectra.hpp"

namespace rydpol {

/// Parse a frequency with an explicit unit tag into rad/s. Accepted forms:
/// "<x>Hz" with optional SI prefix (u, m, k, M, G, T), interpreted as an
/// ordinary frequency (multiplied by 2*pi), or "<x>rad/s" taken verbatim.
double parse_frequency(const std::string& text);

/// Parse an angle: "<x>deg", "<x>rad", or a bare number (degrees). Returns
/// radians.
double parse_angle(const std::string& text);

/// Angle grid "start:stop:step" in degrees (inclusive endpoints given exact
/// division); a single angle is also accepted. Returns degrees.
std::vector<double> parse_angle_grid(const std::string& text);

/// Frequency grid "start:stop:count" where start/stop carry unit tags and
/// count is an integer >= 2; a single frequency is also accepted. Returns
/// rad/s.
std::vector<double> parse_frequency_grid(const std::string& text);

/// Full simulation configuration as read from a JSON file plus CLI overrides.
struct SimulationConfig {
  std::string preset_name = "type1";
  FieldConfig probe;                 // polarization fixed to z in run mode
  FieldConfig coupling;
  double rf_rabi = 0.0;              // rad/s
  double rf_detuning = 0.0;          // rad/s
  RateConfig rates;
  VaporConfig vapor;
  std::vector<double> theta_grid_deg{};
  std::vector<double> detuning_grid{};   // rad/s
  SweepOptions sweep;

  /// Default grids per the survey protocol: theta 0..355 in 5 degree steps;
  /// coupling detuning spanning +-4x the largest dressed splitting, 201 pts.
  void apply_default_grids();
  void validate() const;
};

/// Parse a JSON config document; unknown keys raise std::invalid_argument.
SimulationConfig parse_config_json(const std::string& json_text);

/// Load and parse a config file.
SimulationConfig load_config_file(const std::string& path);

/// Human-readable schema describing every accepted key and unit convention.
std::string config_schema();

}  // namespace rydpol
