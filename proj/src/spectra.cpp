#include "rydpol/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rydpol {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kEpsilon0 = 8.8541878128e-12;
constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;

std::vector<int> level_indices(const std::vector<HyperfineState>& basis, int level_index) {
  std::vector<int> out;
  for (size_t k = 0; k < basis.size(); ++k)
    if (basis[k].level_index == level_index) out.push_back(static_cast<int>(k));
  return out;
}

struct VelocityGrid {
  std::vector<double> v;
  std::vector<double> weight;  // normalized
};

VelocityGrid velocity_grid(double temperature, double mass, int n_points,
                           double cutoff_sigmas) {
  if (n_points < 3) throw std::domain_error("Doppler averaging needs at least 3 points");
  if (temperature < 0.0 || mass <= 0.0)
    throw std::domain_error("invalid temperature or mass for Doppler averaging");
  VelocityGrid g;
  if (temperature == 0.0) {
    g.v = {0.0};
    g.weight = {1.0};
    return g;
  }
  const double sigma = std::sqrt(kBoltzmann * temperature / mass);
  const double vmax = cutoff_sigmas * sigma;
  g.v.resize(n_points);
  g.weight.resize(n_points);
  double sum = 0.0;
  for (int k = 0; k < n_points; ++k) {
    double v = -vmax + 2.0 * vmax * k / (n_points - 1);
    double w = std::exp(-0.5 * v * v / (sigma * sigma));
    if (k == 0 || k == n_points - 1) w *= 0.5;  // trapezoidal ends
    g.v[k] = v;
    g.weight[k] = w;
    sum += w;
  }
  for (double& w : g.weight) w /= sum;
  return g;
}

double fold_angle_deg(double theta) {
  double t = std::fmod(theta, 360.0);
  if (t < 0.0) t += 360.0;
  if (t >= 180.0) t -= 180.0;  // polarization is a director, not a vector
  if (t > 90.0) t = 180.0 - t; // mirror symmetry about the quantization axis
  return t;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RYDPOL_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

}  // namespace

double VaporConfig::probe_omega() const { return 2.0 * kPi * kSpeedOfLight / lambda_probe; }

void VaporConfig::validate() const {
  if (density <= 0.0 || path_length <= 0.0 || temperature < 0.0 ||
      lambda_probe <= 0.0 || lambda_coupling <= 0.0 || atom_mass <= 0.0 ||
      probe_dipole <= 0.0)
    throw std::domain_error("vapor configuration values must be positive");
}

double extinction(const Eigen::MatrixXcd& rho, const LadderSpec& ladder,
                  const FieldConfig& probe, const VaporConfig& vapor) {
  vapor.validate();
  if (probe.radial_rabi <= 0.0)
    throw std::domain_error("extinction requires a nonzero probe Rabi frequency");
  const auto basis = enumerate_basis(ladder);
  if (rho.rows() != static_cast<Eigen::Index>(basis.size()))
    throw std::invalid_argument("density matrix dimension does not match the ladder");

  const double scale = max_pi_element(ladder.g(), ladder.i());
  FieldConfig norm = probe;
  norm.radial_rabi = probe.radial_rabi / scale;
  CouplingBlock block = coupling_operator(norm, ladder.g(), ladder.i(), ladder.nuclear_spin);

  const auto g_idx = level_indices(basis, 0);
  const auto i_idx = level_indices(basis, 1);
  double sum = 0.0;
  for (size_t a = 0; a < i_idx.size(); ++a)
    for (size_t b = 0; b < g_idx.size(); ++b) {
      Complex B = block.matrix(a, b);
      if (B == Complex(0.0)) continue;
      sum += (rho(g_idx[b], i_idx[a]) * B).imag();
    }

  const double d = vapor.probe_dipole;
  const double prefactor = 2.0 * vapor.density * vapor.probe_omega() * d * d /
                           (kSpeedOfLight * kEpsilon0 * kHbar *
                            norm.radial_rabi * norm.radial_rabi);
  return prefactor * sum;
}

double transmission(double alpha, double path_length) {
  return std::exp(-alpha * path_length);
}

double doppler_average(const std::function<double(double)>& f, double temperature,
                       double mass, int n_points, double cutoff_sigmas) {
  VelocityGrid g = velocity_grid(temperature, mass, n_points, cutoff_sigmas);
  double acc = 0.0;
  for (size_t k = 0; k < g.v.size(); ++k) acc += g.weight[k] * f(g.v[k]);
  return acc;
}

std::vector<double> lock_in_correct(const std::vector<double>& raw,
                                    const std::vector<double>& reference) {
  if (raw.size() != reference.size())
    throw std::invalid_argument("lock-in correction requires equal-length curves");
  std::vector<double> out(raw.size());
  for (size_t k = 0; k < raw.size(); ++k) out[k] = raw[k] - reference[k];
  return out;
}

std::vector<int> find_peaks(const std::vector<double>& y, double min_prominence_fraction) {
  std::vector<int> peaks;
  const int n = static_cast<int>(y.size());
  if (n < 3) return peaks;
  const double lo = *std::min_element(y.begin(), y.end());
  const double hi = *std::max_element(y.begin(), y.end());
  const double range = hi - lo;
  if (range <= 0.0) return peaks;
  const double min_prom = min_prominence_fraction * range;

  for (int i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    int j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;  // plateau
    if (j + 1 < n && y[j + 1] > y[i]) continue;
    // Topographic prominence: lowest point on the path to higher ground.
    double left_min = y[i];
    for (int k = i - 1; k >= 0; --k) {
      if (y[k] > y[i]) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = y[i];
    for (int k = j + 1; k < n; ++k) {
      if (y[k] > y[i]) break;
      right_min = std::min(right_min, y[k]);
    }
    double prominence = y[i] - std::max(left_min, right_min);
    if (prominence >= min_prom) peaks.push_back(i);
    i = j;
  }
  return peaks;
}

Spectrogram sweep_spectrogram(const LadderSpec& ladder, const FieldConfig& probe,
                              const FieldConfig& coupling, double rf_rabi,
                              double rf_detuning, const std::vector<double>& theta_deg,
                              const std::vector<double>& detuning,
                              const RateConfig& rates, const VaporConfig& vapor,
                              const SweepOptions& options) {
  ladder.validate();
  vapor.validate();
  if (theta_deg.empty() || detuning.empty())
    throw std::invalid_argument("sweep grids must be non-empty");

  const auto basis = enumerate_basis(ladder);
  const int dim = static_cast<int>(basis.size());
  const DissipatorSpec diss = build_collapse_operators(ladder, rates);
  const CycleSteadySolver fast(basis, diss);

  const double kp = 2.0 * kPi / vapor.lambda_probe;
  const double kc = 2.0 * kPi / vapor.lambda_coupling;
  const VelocityGrid vgrid =
      options.doppler ? velocity_grid(vapor.temperature, vapor.atom_mass,
                                      options.velocity_points, options.velocity_cutoff_sigmas)
                      : VelocityGrid{{0.0}, {1.0}};

  // Map requested angles onto canonical fold representatives.
  std::vector<double> canon;
  std::vector<int> row_of(theta_deg.size());
  {
    std::map<long long, int> seen;
    for (size_t t = 0; t < theta_deg.size(); ++t) {
      double c = options.fold_symmetry ? fold_angle_deg(theta_deg[t]) : theta_deg[t];
      long long key = std::llround(c * 1e9);
      auto [it, inserted] = seen.emplace(key, static_cast<int>(canon.size()));
      if (inserted) canon.push_back(c);
      row_of[t] = it->second;
    }
  }
  const int n_canon = static_cast<int>(canon.size());
  const int n_det = static_cast<int>(detuning.size());

  // With zero probe and RF base detuning, negating all detunings conjugates
  // the steady state (up to a sublevel gauge), and the symmetric velocity
  // grid absorbs the probe Doppler shift: alpha(dc, v) = alpha(-dc, -v).
  // The detuning axis then folds onto |dc|.
  const bool fold_detuning =
      options.fold_symmetry && probe.detuning == 0.0 && rf_detuning == 0.0;
  std::vector<double> canon_det;
  std::vector<int> col_of(n_det);
  {
    std::map<long long, int> seen;
    for (int d = 0; d < n_det; ++d) {
      double eff = coupling.detuning + detuning[d];
      double c = fold_detuning ? std::abs(eff) : eff;
      long long key = std::llround(c);
      auto [it, inserted] = seen.emplace(key, static_cast<int>(canon_det.size()));
      if (inserted) canon_det.push_back(c);
      col_of[d] = it->second;
    }
  }
  const int n_cdet = static_cast<int>(canon_det.size());

  // Field-coupling parts of H per canonical angle (detunings applied per point).
  std::vector<Eigen::MatrixXcd> H_fields(n_canon);
  std::vector<std::vector<int>> idx;
  for (int lev = 0; lev < 4; ++lev) idx.push_back(level_indices(basis, lev));
  FieldConfig probe0 = probe, coupling0 = coupling;
  probe0.detuning = 0.0;
  coupling0.detuning = 0.0;
  for (int t = 0; t < n_canon; ++t) {
    FieldConfig rf;
    rf.polarization = Polarization::linear_at_angle(canon[t] * kPi / 180.0);
    rf.radial_rabi = rf_rabi;
    rf.detuning = 0.0;
    H_fields[t] = build_hamiltonian(ladder, probe0, coupling0, rf);
  }

  auto solve_alpha = [&](const Eigen::MatrixXcd& H_base, double dc) {
    double acc = 0.0;
    for (size_t k = 0; k < vgrid.v.size(); ++k) {
      const double v = vgrid.v[k];
      const double dp_eff = probe.detuning - kp * v;
      const double dc_eff = dc + kc * v;
      Eigen::MatrixXcd H = H_base;
      const double diag[4] = {0.0, -dp_eff, -(dp_eff + dc_eff),
                              -(dp_eff + dc_eff + rf_detuning)};
      for (int lev = 1; lev < 4; ++lev)
        for (int s : idx[lev]) H(s, s) += diag[lev];
      SteadyState st = options.fast_solver ? fast.solve(H) : steady_state(H, diss);
      acc += vgrid.weight[k] * extinction(st.rho, ladder, probe, vapor);
    }
    return acc;
  };

  // Coupling-off reference (independent of theta and coupling detuning).
  double alpha_ref;
  {
    FieldConfig rf;
    rf.polarization = Polarization::linear_at_angle(0.0);
    rf.radial_rabi = rf_rabi;
    FieldConfig coupling_off = coupling0;
    coupling_off.radial_rabi = 0.0;
    Eigen::MatrixXcd H_off = build_hamiltonian(ladder, probe0, coupling_off, rf);
    alpha_ref = solve_alpha(H_off, 0.0);
  }
  const double t_ref = transmission(alpha_ref, vapor.path_length);

  Eigen::MatrixXd alpha_canon(n_canon, n_cdet);
  {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const int total = n_canon * n_cdet;
    auto worker = [&]() {
      for (;;) {
        int task = next.fetch_add(1);
        if (task >= total) return;
        int t = task / n_cdet, d = task % n_cdet;
        try {
          alpha_canon(t, d) = solve_alpha(H_fields[t], canon_det[d]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    int n_workers = std::min(resolve_workers(options.workers), total);
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  Spectrogram out;
  out.theta_deg = theta_deg;
  out.detuning = detuning;
  out.reference_transmission = t_ref;
  const int n_theta = static_cast<int>(theta_deg.size());
  out.alpha.resize(n_theta, n_det);
  out.transmission_map.resize(n_theta, n_det);
  out.signal.resize(n_theta, n_det);
  for (int t = 0; t < n_theta; ++t)
    for (int d = 0; d < n_det; ++d) {
      double a = alpha_canon(row_of[t], col_of[d]);
      double tr = transmission(a, vapor.path_length);
      out.alpha(t, d) = a;
      out.transmission_map(t, d) = tr;
      out.signal(t, d) = tr - t_ref;
    }
  (void)dim;
  return out;
}

std::vector<double> central_cut(const Spectrogram& spec, double tol) {
  int best = -1;
  double best_abs = tol;
  for (size_t d = 0; d < spec.detuning.size(); ++d)
    if (std::abs(spec.detuning[d]) <= best_abs) {
      best_abs = std::abs(spec.detuning[d]);
      best = static_cast<int>(d);
    }
  if (best < 0)
    throw std::domain_error("detuning grid does not contain zero");
  std::vector<double> out(spec.theta_deg.size());
  for (size_t t = 0; t < out.size(); ++t) out[t] = spec.signal(t, best);
  return out;
}

}  // namespace rydpol
