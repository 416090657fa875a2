#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "rydpol/basis.hpp"
#include "rydpol/couplings.hpp"
#include "rydpol/master.hpp"

namespace rydpol {

/// Vapor-cell and probe-beam parameters (SI units).
struct VaporConfig {
  double density = 1.0e16;            // atoms / m^3
  double path_length = 0.05;          // m
  double temperature = 300.0;         // K (Doppler averaging)
  double lambda_probe = 780.241e-9;   // m
  double lambda_coupling = 479.8e-9;  // m
  double atom_mass = 1.44316e-25;     // kg
  double probe_dipole = 3.584e-29;    // C m, radial dipole of the probe line

  double probe_omega() const;         // rad/s, derived from lambda_probe
  void validate() const;              // throws std::domain_error
};

/// Extinction coefficient (1/m) of the probe from a steady-state density
/// matrix. The probe field must match the one used to build the Hamiltonian.
double extinction(const Eigen::MatrixXcd& rho, const LadderSpec& ladder,
                  const FieldConfig& probe, const VaporConfig& vapor);

/// Beer-Lambert transmission through the cell.
double transmission(double alpha, double path_length);

/// One-dimensional Maxwell-Boltzmann average of f(v) on a symmetric
/// trapezoidal grid of n_points spanning +-cutoff_sigmas standard deviations.
/// Throws std::domain_error for n_points < 3. temperature == 0 returns f(0).
double doppler_average(const std::function<double(double)>& f, double temperature,
                       double mass, int n_points = 41, double cutoff_sigmas = 4.0);

/// Lock-in style background subtraction: raw minus the coupling-off
/// reference, element-wise. Throws std::invalid_argument on size mismatch.
std::vector<double> lock_in_correct(const std::vector<double>& raw,
                                    const std::vector<double>& reference);

/// Local maxima whose topographic prominence is at least
/// min_prominence_fraction of the full data range.
std::vector<int> find_peaks(const std::vector<double>& y,
                            double min_prominence_fraction = 0.05);

struct SweepOptions {
  bool doppler = true;
  int velocity_points = 41;
  double velocity_cutoff_sigmas = 4.0;
  int workers = 0;              // 0 = hardware concurrency (or RYDPOL_WORKERS)
  bool fold_symmetry = true;    // exploit theta -> -theta and theta+180 symmetry
  bool fast_solver = true;      // spectral cycle solver with direct fallback
};

struct Spectrogram {
  std::vector<double> theta_deg;
  std::vector<double> detuning;       // coupling detuning, rad/s
  Eigen::MatrixXd alpha;              // rows: theta, cols: detuning
  Eigen::MatrixXd transmission_map;
  Eigen::MatrixXd signal;             // transmission minus coupling-off reference
  double reference_transmission = 1.0;
};

/// Full (theta, coupling-detuning) scan: for every grid point, solve the
/// steady state (Doppler-averaged when enabled), convert to transmission and
/// subtract the coupling-off reference.
Spectrogram sweep_spectrogram(const LadderSpec& ladder, const FieldConfig& probe,
                              const FieldConfig& coupling, double rf_rabi,
                              double rf_detuning, const std::vector<double>& theta_deg,
                              const std::vector<double>& detuning,
                              const RateConfig& rates, const VaporConfig& vapor,
                              const SweepOptions& options = {});

/// Signal column at zero coupling detuning, one value per theta. Throws
/// std::domain_error when the detuning grid does not contain zero.
std::vector<double> central_cut(const Spectrogram& spec, double tol = 1.0);

}  // namespace rydpol
