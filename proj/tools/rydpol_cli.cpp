#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "rydpol/angular.hpp"
#include "rydpol/config.hpp"
#include "rydpol/dressed.hpp"
#include "rydpol/master.hpp"
#include "rydpol/spectra.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr double kPi = 3.14159265358979323846;

using namespace rydpol;

std::string feature_name(CentralFeature f) {
  switch (f) {
    case CentralFeature::absent: return "absent";
    case CentralFeature::present: return "present";
    default: return "dominant";
  }
}

int cmd_presets() {
  for (const auto& name : preset_names()) {
    LadderSpec ladder = preset(name);
    auto basis = enumerate_basis(ladder);
    std::cout << name << ": " << basis.size() << " states (";
    for (size_t l = 0; l < ladder.levels.size(); ++l) {
      if (l) std::cout << " ";
      std::cout << ladder.levels[l].label << "="
                << level_state_count(ladder.levels[l], ladder.nuclear_spin);
    }
    std::cout << (ladder.dummy_state_included ? " +dummy" : "") << ")\n";
  }
  return 0;
}

int cmd_dressed(const std::string& preset_name, const std::string& rabi,
                const std::string& detuning) {
  LadderSpec ladder = preset(preset_name);
  double omega = parse_frequency(rabi);
  double delta = parse_frequency(detuning);
  DressedManifold m = dress_rydberg_pair(ladder, omega, delta);
  std::cout << "# dressed manifold, preset=" << preset_name
            << " rf_rabi=" << omega << "rad/s rf_detuning=" << delta << "rad/s\n";
  std::cout << "# mJ mI s shift[rad/s] pair_rabi[rad/s]\n";
  for (const auto& e : m.entries)
    std::cout << e.mJ.str() << " " << e.mI.str() << " " << std::showpos << e.s
              << std::noshowpos << " " << std::setprecision(12) << e.energy_shift
              << " " << e.pair_rabi << "\n";
  std::cout << "# central feature at theta=0:  "
            << feature_name(predict_central_peak(ladder, 0.0)) << "\n";
  std::cout << "# central feature at theta=90: "
            << feature_name(predict_central_peak(ladder, kPi / 2)) << "\n";
  return 0;
}

bool report(const std::string& name, bool ok, double value, double bound) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << " (value " << value
            << ", bound " << bound << ")\n";
  return ok;
}

int cmd_verify(double perturb_6j) {
  if (perturb_6j != 1.0) detail::perturb_6j_for_test(perturb_6j);
  bool all = true;

  // Angular-momentum orthogonality.
  {
    double worst = 0.0;
    HalfInt j1(3), j2(4);  // 3/2 and 2
    for (int tj = 1; tj <= 7; tj += 2)
      for (int tjp = 1; tjp <= 7; tjp += 2)
        for (int tM = -std::min(tj, tjp); tM <= std::min(tj, tjp); tM += 2) {
          double sum = 0.0;
          for (int tm1 = -3; tm1 <= 3; tm1 += 2) {
            int tm2 = tM - tm1;
            if (std::abs(tm2) > 4) continue;
            sum += clebsch_gordan(j1, HalfInt(tm1), j2, HalfInt(tm2), HalfInt(tj),
                                  HalfInt(tM)) *
                   clebsch_gordan(j1, HalfInt(tm1), j2, HalfInt(tm2), HalfInt(tjp),
                                  HalfInt(tM));
          }
          worst = std::max(worst, std::abs(sum - (tj == tjp ? 1.0 : 0.0)));
        }
    all &= report("Clebsch-Gordan orthogonality", worst < 1e-12, worst, 1e-12);
  }

  // Radiative branching ratios sum to one for every intermediate sublevel.
  for (const std::string& name : preset_names()) {
    LadderSpec ladder = preset(name);
    RateConfig rates;
    rates.gamma_i = 1.0;
    auto diss = build_collapse_operators(ladder, rates);
    auto basis = enumerate_basis(ladder);
    double worst = 0.0;
    for (size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].level_index != 1) continue;
      double sum = 0.0;
      for (const auto& op : diss)
        for (const auto& e : op.entries)
          if (e.col == static_cast<int>(k) && op.label.rfind("radiative", 0) == 0)
            sum += e.amplitude * e.amplitude;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    all &= report("branching ratio sum (" + name + ")", worst < 1e-12, worst, 1e-12);
  }

  // Dressed transition strengths: explicit expansion vs closed form.
  for (const std::string& name : {"type1", "type2"}) {
    double r = dressed_strength_residual(preset(name));
    all &= report("dressed strength residual (" + name + ")", r < 1e-10, r, 1e-10);
  }

  // Steady state vs long-time evolution on the small ladder.
  {
    LadderSpec ladder = preset("model_atom");
    RateConfig rates;
    rates.gamma_i = 1.0e6;
    rates.gamma_transit = 5.0e4;
    rates.gamma_dummy = 1.0e7;  // keep the evolution non-stiff
    FieldConfig probe{Polarization::linear_at_angle(0.0), 2.0e5, 0.0};
    FieldConfig coupling{Polarization::linear_at_angle(0.0), 8.0e5, 0.0};
    FieldConfig rf{Polarization::linear_at_angle(0.0), 6.0e5, 0.0};
    Eigen::MatrixXcd H = build_hamiltonian(ladder, probe, coupling, rf);
    auto diss = build_collapse_operators(ladder, rates);
    SteadyState st = steady_state(H, diss);
    // Maximally mixed start: respects the mJ -> -mJ symmetry, so the limit
    // matches the symmetric member selected for a degenerate steady family.
    Eigen::MatrixXcd rho0 =
        Eigen::MatrixXcd::Identity(H.rows(), H.cols()) / double(H.rows());
    Eigen::MatrixXcd rho_t = time_evolve(H, diss, rho0, 200.0 / rates.gamma_transit);
    double diff = (rho_t - st.rho).norm();
    all &= report("steady state vs long-time evolution", diff < 1e-6, diff, 1e-6);
  }

  std::cout << (all ? "verify: all checks passed\n" : "verify: FAILURES detected\n");
  return all ? 0 : 1;
}

void write_output(const std::string& path, const SimulationConfig& cfg,
                  const Spectrogram& spec, double walltime_s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << "# rydpol spectrogram v" << kVersion << "\n";
  out << "# preset: " << cfg.preset_name << "\n";
  out << std::setprecision(12);
  out << "# probe_rabi_rad_s: " << cfg.probe.radial_rabi << "\n";
  out << "# probe_detuning_rad_s: " << cfg.probe.detuning << "\n";
  out << "# coupling_rabi_rad_s: " << cfg.coupling.radial_rabi << "\n";
  out << "# rf_rabi_rad_s: " << cfg.rf_rabi << "\n";
  out << "# rf_detuning_rad_s: " << cfg.rf_detuning << "\n";
  out << "# doppler: " << (cfg.sweep.doppler ? "on" : "off") << "\n";
  out << "# reference_transmission: " << spec.reference_transmission << "\n";
  out << "# walltime_s: " << walltime_s << "\n";
  out << "# columns: theta_deg coupling_detuning_rad_s transmission signal alpha_1_m\n";
  for (size_t t = 0; t < spec.theta_deg.size(); ++t)
    for (size_t d = 0; d < spec.detuning.size(); ++d)
      out << spec.theta_deg[t] << " " << spec.detuning[d] << " "
          << spec.transmission_map(t, d) << " " << spec.signal(t, d) << " "
          << spec.alpha(t, d) << "\n";
}

void write_manifest(const std::string& path, const SimulationConfig& cfg,
                    double walltime_s) {
  nlohmann::json m;
  m["version"] = kVersion;
  m["preset"] = cfg.preset_name;
  m["probe"] = {{"rabi_rad_s", cfg.probe.radial_rabi},
                {"detuning_rad_s", cfg.probe.detuning}};
  m["coupling"] = {{"rabi_rad_s", cfg.coupling.radial_rabi},
                   {"detuning_rad_s", cfg.coupling.detuning}};
  m["rf"] = {{"rabi_rad_s", cfg.rf_rabi}, {"detuning_rad_s", cfg.rf_detuning}};
  m["rates"] = {{"gamma_i", cfg.rates.gamma_i},
                {"gamma_transit", cfg.rates.gamma_transit},
                {"gamma_collision", cfg.rates.gamma_collision},
                {"gamma_r1_rad", cfg.rates.gamma_r1_rad},
                {"gamma_r2_rad", cfg.rates.gamma_r2_rad},
                {"gamma_dummy", cfg.rates.resolved_gamma_dummy()}};
  m["vapor"] = {{"density", cfg.vapor.density},
                {"path_length", cfg.vapor.path_length},
                {"temperature", cfg.vapor.temperature},
                {"lambda_probe", cfg.vapor.lambda_probe},
                {"lambda_coupling", cfg.vapor.lambda_coupling}};
  m["grid"] = {{"theta_points", cfg.theta_grid_deg.size()},
               {"detuning_points", cfg.detuning_grid.size()}};
  m["sweep"] = {{"doppler", cfg.sweep.doppler},
                {"velocity_points", cfg.sweep.velocity_points},
                {"fold_symmetry", cfg.sweep.fold_symmetry},
                {"fast_solver", cfg.sweep.fast_solver},
                {"workers", cfg.sweep.workers}};
  m["walltime_s"] = walltime_s;
  std::ofstream out(path);
  out << m.dump(2) << "\n";
}

int cmd_run(const std::string& config_path, const std::string& output_path,
            std::vector<std::pair<std::string, std::string>> overrides) {
  SimulationConfig cfg =
      config_path.empty() ? SimulationConfig{} : load_config_file(config_path);
  for (const auto& [key, value] : overrides) {
    if (key == "preset") cfg.preset_name = value;
    else if (key == "probe-rabi") cfg.probe.radial_rabi = parse_frequency(value);
    else if (key == "probe-detuning") cfg.probe.detuning = parse_frequency(value);
    else if (key == "coupling-rabi") cfg.coupling.radial_rabi = parse_frequency(value);
    else if (key == "coupling-detuning") cfg.detuning_grid = parse_frequency_grid(value);
    else if (key == "rf-rabi") cfg.rf_rabi = parse_frequency(value);
    else if (key == "rf-detuning") cfg.rf_detuning = parse_frequency(value);
    else if (key == "theta") cfg.theta_grid_deg = parse_angle_grid(value);
    else if (key == "doppler") cfg.sweep.doppler = (value == "on" || value == "true");
    else if (key == "workers") cfg.sweep.workers = std::stoi(value);
    else throw std::invalid_argument("unknown override '" + key + "'");
  }
  cfg.apply_default_grids();
  cfg.validate();

  LadderSpec ladder = preset(cfg.preset_name);
  auto t0 = std::chrono::steady_clock::now();
  Spectrogram spec = sweep_spectrogram(ladder, cfg.probe, cfg.coupling, cfg.rf_rabi,
                                       cfg.rf_detuning, cfg.theta_grid_deg,
                                       cfg.detuning_grid, cfg.rates, cfg.vapor,
                                       cfg.sweep);
  double walltime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_output(output_path, cfg, spec, walltime);
  write_manifest(output_path + ".manifest.json", cfg, walltime);
  std::cout << "wrote " << spec.theta_deg.size() * spec.detuning.size()
            << " records to " << output_path << " in " << std::setprecision(4)
            << walltime << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-ladder RF polarimetry simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "compute a (theta, detuning) spectrogram");
  std::string config_path, output_path = "spectrogram.txt";
  run->add_option("-c,--config", config_path, "JSON config file");
  run->add_option("-o,--output", output_path, "output data file");
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string preset_ov, probe_rabi, probe_det, coupling_rabi, coupling_det;
  std::string rf_rabi_s, rf_det_s, theta_s, doppler_s, workers_s;
  run->add_option("--preset", preset_ov, "ladder preset");
  run->add_option("--probe-rabi", probe_rabi, "probe Rabi frequency (unit-tagged)");
  run->add_option("--probe-detuning", probe_det, "probe detuning");
  run->add_option("--coupling-rabi", coupling_rabi, "coupling Rabi frequency");
  run->add_option("--coupling-detuning", coupling_det, "detuning grid start:stop:count");
  run->add_option("--rf-rabi", rf_rabi_s, "RF Rabi frequency");
  run->add_option("--rf-detuning", rf_det_s, "RF detuning");
  run->add_option("--theta", theta_s, "angle grid start:stop:step in degrees");
  run->add_option("--doppler", doppler_s, "on|off");
  run->add_option("--workers", workers_s, "worker thread count");

  auto* dressed = app.add_subcommand("dressed", "print the analytic dressed manifold");
  std::string d_preset = "type1", d_rabi = "10MHz", d_det = "0Hz";
  dressed->add_option("--preset", d_preset, "ladder preset");
  dressed->add_option("--rf-rabi", d_rabi, "RF Rabi frequency");
  dressed->add_option("--rf-detuning", d_det, "RF detuning");

  auto* verify = app.add_subcommand("verify", "run cross-module consistency checks");
  double perturb = 1.0;
  verify->add_option("--perturb-6j", perturb, "test hook: scale 6j symbols")
      ->group("");  // hidden

  auto* presets_cmd = app.add_subcommand("presets", "list ladder presets");
  auto* schema = app.add_subcommand("schema", "print the config file schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      auto add = [&](const char* k, const std::string& v) {
        if (!v.empty()) overrides.emplace_back(k, v);
      };
      add("preset", preset_ov);
      add("probe-rabi", probe_rabi);
      add("probe-detuning", probe_det);
      add("coupling-rabi", coupling_rabi);
      add("coupling-detuning", coupling_det);
      add("rf-rabi", rf_rabi_s);
      add("rf-detuning", rf_det_s);
      add("theta", theta_s);
      add("doppler", doppler_s);
      add("workers", workers_s);
      return cmd_run(config_path, output_path, overrides);
    }
    if (app.got_subcommand(dressed)) return cmd_dressed(d_preset, d_rabi, d_det);
    if (app.got_subcommand(verify)) return cmd_verify(perturb);
    if (app.got_subcommand(presets_cmd)) return cmd_presets();
    if (app.got_subcommand(schema)) {
      std::cout << rydpol::config_schema();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
