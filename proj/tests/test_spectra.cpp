#include <doctest.h>

#include <cmath>
#include <vector>

#include "rydpol/basis.hpp"
#include "rydpol/master.hpp"
#include "rydpol/spectra.hpp"

using namespace rydpol;

namespace {

FieldConfig make_field(double rabi, double detuning, double theta = 0.0) {
  FieldConfig f;
  f.polarization = Polarization::linear_at_angle(theta);
  f.radial_rabi = rabi;
  f.detuning = detuning;
  return f;
}

// Small ladder whose F=1 -> F'=2 probe step couples every ground sublevel,
// so a pi-polarized probe leaves no dark state and the medium absorbs.
LadderSpec small_hyperfine() {
  const HalfInt half = HalfInt::half(1), three_half = HalfInt::half(3);
  return LadderSpec{
      "small_hf",
      half,
      {
          {"g", half, 0, half, HalfInt::from_int(1), 0.0},
          {"i", half, 1, three_half, HalfInt::from_int(2), 0.0},
          {"r1", half, 2, three_half, HalfInt::from_int(1), 0.0},
          {"r2", half, 1, half, HalfInt::from_int(0), 0.0},
      },
      true};
}

}  // namespace

TEST_CASE("vapor configuration validation and derived quantities") {
  VaporConfig v;
  CHECK_NOTHROW(v.validate());
  CHECK(v.probe_omega() ==
        doctest::Approx(2.0 * 3.14159265358979323846 * 299792458.0 /
                        780.241e-9)
            .epsilon(1e-12));
  v.density = -1.0;
  CHECK_THROWS_AS(v.validate(), std::domain_error);
  v = VaporConfig{};
  v.lambda_probe = 0.0;
  CHECK_THROWS_AS(v.validate(), std::domain_error);
}

TEST_CASE("transmission is Beer-Lambert") {
  CHECK(transmission(0.0, 0.05) == 1.0);
  CHECK(transmission(10.0, 0.05) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("weak-probe two-level extinction matches the Lorentzian oracle") {
  // With the coupling and RF fields off, the ladder reduces to a two-level
  // probe transition per mF column. The on-resonance extinction of a weak
  // probe must be positive (absorption) and the detuning profile must be a
  // Lorentzian of half-width ~ Gamma_total / 2 in the susceptibility sense.
  auto lad = small_hyperfine();
  RateConfig rates;
  rates.gamma_i = 2.0 * 3.14159265358979323846 * 6.07e6;
  rates.gamma_transit = 2.0 * 3.14159265358979323846 * 0.15e6;
  auto D = build_collapse_operators(lad, rates);
  VaporConfig vapor;

  auto alpha_at = [&](double dp) {
    auto probe = make_field(2.0e5, dp);
    auto H = build_hamiltonian(lad, probe, make_field(0.0, 0.0),
                               make_field(0.0, 0.0));
    auto ss = steady_state(H, D);
    return extinction(ss.rho, lad, probe, vapor);
  };

  // The ge coherence decays at (Gamma_e + Gamma_g) / 2 with
  // Gamma_e = gamma_i + gamma_transit and Gamma_g = gamma_transit.
  const double gt = rates.gamma_i + 2.0 * rates.gamma_transit;
  const double a0 = alpha_at(0.0);
  CHECK(a0 > 0.0);
  // Half width at half maximum of the weak-probe absorption.
  const double ah = alpha_at(0.5 * gt);
  CHECK(ah / a0 == doctest::Approx(0.5).epsilon(0.01));
  // Symmetric in detuning.
  CHECK(alpha_at(1.0e6) == doctest::Approx(alpha_at(-1.0e6)).epsilon(1e-6));

  // Weak-probe scaling: alpha is intensity independent (ratio of rho_ge to
  // the Rabi frequency), so halving the probe changes alpha only at second
  // order.
  auto probe2 = make_field(1.0e5, 0.0);
  auto H2 = build_hamiltonian(lad, probe2, make_field(0.0, 0.0),
                              make_field(0.0, 0.0));
  auto ss2 = steady_state(H2, D);
  CHECK(extinction(ss2.rho, lad, probe2, vapor) ==
        doctest::Approx(a0).epsilon(1e-3));
}

TEST_CASE("doppler averaging") {
  VaporConfig v;
  // Gaussian test function integrates to a known value against the
  // Maxwell-Boltzmann weight; the average of a constant is the constant.
  CHECK(doppler_average([](double) { return 3.5; }, 300.0, v.atom_mass) ==
        doctest::Approx(3.5).epsilon(1e-6));
  // Zero temperature evaluates at v = 0 exactly.
  CHECK(doppler_average([](double vel) { return vel == 0.0 ? 1.0 : -1.0; }, 0.0,
                        v.atom_mass) == 1.0);
  // Odd functions average to zero on the symmetric grid.
  CHECK(doppler_average([](double vel) { return vel; }, 300.0, v.atom_mass) ==
        doctest::Approx(0.0).scale(100.0));
  // <v^2> = kB T / m within trapezoid accuracy.
  const double t = 300.0;
  const double expect = 1.380649e-23 * t / v.atom_mass;
  CHECK(doppler_average([](double vel) { return vel * vel; }, t, v.atom_mass,
                        201, 6.0) == doctest::Approx(expect).epsilon(1e-3));
  CHECK_THROWS_AS(doppler_average([](double) { return 0.0; }, 300.0,
                                  v.atom_mass, 2),
                  std::domain_error);
}

TEST_CASE("lock-in correction") {
  CHECK_THROWS_AS(lock_in_correct({1.0, 2.0}, {1.0}), std::invalid_argument);
  auto out = lock_in_correct({1.0, 2.0, 3.0}, {0.5, 0.5, 0.5});
  REQUIRE(out.size() == 3);
  CHECK(out[1] == doctest::Approx(1.5));
}

TEST_CASE("peak finding with prominence threshold") {
  // Two tall peaks, one shallow ripple below threshold.
  std::vector<double> y = {0, 1, 10, 1, 0, 0.3, 0.1, 0, 1, 8, 1, 0};
  auto peaks = find_peaks(y, 0.05);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0] == 2);
  CHECK(peaks[1] == 9);
  // Raising the threshold above the ripple keeps both tall peaks; raising it
  // above the second peak keeps only the tallest.
  CHECK(find_peaks(y, 0.5).size() == 2);
  CHECK(find_peaks(y, 0.9).size() == 1);
  // Plateau peak reports a single index.
  std::vector<double> plat = {0, 2, 2, 2, 0};
  CHECK(find_peaks(plat, 0.05).size() == 1);
  // Monotone data has no interior peak.
  CHECK(find_peaks({0, 1, 2, 3}, 0.05).empty());
}

TEST_CASE("spectrogram sweep: folding matches the unfolded reference") {
  auto lad = small_hyperfine();
  auto probe = make_field(3.0e5, 0.0);
  auto coupling = make_field(1.0e6, 0.0);
  const double rf_rabi = 2.0e7;
  RateConfig rates;
  VaporConfig vapor;
  vapor.temperature = 0.0;

  std::vector<double> thetas = {0.0, 40.0, 140.0, 220.0, 320.0};
  std::vector<double> dets;
  for (int k = -6; k <= 6; ++k) dets.push_back(k * 5.0e6);

  SweepOptions folded;
  folded.doppler = false;
  folded.workers = 1;
  SweepOptions unfolded = folded;
  unfolded.fold_symmetry = false;
  unfolded.fast_solver = false;

  auto a = sweep_spectrogram(lad, probe, coupling, rf_rabi, 0.0, thetas, dets,
                             rates, vapor, folded);
  auto b = sweep_spectrogram(lad, probe, coupling, rf_rabi, 0.0, thetas, dets,
                             rates, vapor, unfolded);
  REQUIRE(a.alpha.rows() == 5);
  REQUIRE(a.alpha.cols() == 13);
  const double scale = b.alpha.cwiseAbs().maxCoeff();
  CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() < 1e-6 * scale);
  CHECK((a.signal - b.signal).cwiseAbs().maxCoeff() < 1e-6);

  // theta = 140 and 220 are mirror angles of 40, so their rows must agree.
  CHECK((b.alpha.row(1) - b.alpha.row(2)).cwiseAbs().maxCoeff() < 1e-6 * scale);
  CHECK((b.alpha.row(1) - b.alpha.row(3)).cwiseAbs().maxCoeff() < 1e-6 * scale);

  // Reference transmission is coupling-off: signal = transmission - ref.
  for (int r = 0; r < a.signal.rows(); ++r)
    for (int c = 0; c < a.signal.cols(); ++c)
      CHECK(a.signal(r, c) == doctest::Approx(a.transmission_map(r, c) -
                                              a.reference_transmission)
                                  .epsilon(1e-12));
}

TEST_CASE("central cut extracts the zero-detuning column") {
  Spectrogram s;
  s.theta_deg = {0.0, 10.0};
  s.detuning = {-1.0e6, 0.0, 1.0e6};
  s.signal.resize(2, 3);
  s.signal << 1, 2, 3, 4, 5, 6;
  auto cut = central_cut(s);
  REQUIRE(cut.size() == 2);
  CHECK(cut[0] == 2.0);
  CHECK(cut[1] == 5.0);

  s.detuning = {1.0e6, 2.0e6, 3.0e6};
  CHECK_THROWS_AS(central_cut(s), std::domain_error);
}
