#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "rydpol/angular.hpp"
#include "rydpol/basis.hpp"
#include "rydpol/dressed.hpp"

using namespace rydpol;

TEST_CASE("dressed pair energies follow the two-level formula") {
  auto t1 = preset("type1");
  const double rabi = 2.0e7;
  const double det = 5.0e6;
  auto man = dress_rydberg_pair(t1, rabi, det);
  REQUIRE_FALSE(man.entries.empty());

  double max_pair_rabi = 0.0;
  for (const auto& e : man.entries) max_pair_rabi = std::max(max_pair_rabi, e.pair_rabi);
  // The strongest column is pinned to the scalar knob.
  CHECK(max_pair_rabi == doctest::Approx(rabi).epsilon(1e-12));

  for (const auto& e : man.entries) {
    if (e.s == 0) {
      CHECK(e.energy_shift == 0.0);
      CHECK(e.pair_rabi == 0.0);
    } else {
      const double expect =
          0.5 * (-det + e.s * std::sqrt(det * det + e.pair_rabi * e.pair_rabi));
      CHECK(e.energy_shift == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("column Rabi ratio of the D5/2-P3/2 pair is sqrt(2/3)") {
  auto t1 = preset("type1");
  auto man = dress_rydberg_pair(t1, 1.0, 0.0);
  std::set<long long> seen;
  std::vector<double> rabis;
  for (const auto& e : man.entries) {
    if (e.s != 1) continue;
    if (!seen.insert(std::llabs(e.mJ.twice())).second) continue;
    rabis.push_back(e.pair_rabi);
  }
  REQUIRE(rabis.size() == 2);  // |mJ| = 1/2 and 3/2 columns
  std::sort(rabis.begin(), rabis.end());
  CHECK(rabis[0] / rabis[1] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
  CHECK(rabis[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ninefold optical 3j ratio for the J=3/2 to J'=3/2 probe step") {
  // The optical factor of transition_strength for type2 (i and r1 both
  // J = 3/2) is 3j(3/2, 3/2, 1; -mJ, mJ, 0)^2, proportional to mJ^2, so the
  // |mJ| = 3/2 columns are nine times stronger than |mJ| = 1/2. Verify by
  // dividing out the hyperfine 3j factor from the full strength.
  auto t2 = preset("type2");
  const HalfInt I = t2.nuclear_spin;
  const HalfInt Ji = t2.i().J;
  const HalfInt J = t2.r1().J;
  const HalfInt Fp = HalfInt::from_int(3);

  auto optical_factor = [&](HalfInt mJ, HalfInt mI) {
    DressedEntry e{mJ, mI, 0, 0.0, 0.0};
    const HalfInt mFp = mJ + mI;
    const double full = transition_strength(Ji, Fp, mFp, e, J, I);
    const double hf = wigner_3j(Ji, Fp, I, -mJ, mFp, mJ - mFp);
    REQUIRE(hf != 0.0);
    return full / (hf * hf);
  };

  const double f32 = optical_factor(HalfInt(3), HalfInt(1));
  const double f12 = optical_factor(HalfInt(1), HalfInt(3));
  REQUIRE(f12 > 0.0);
  CHECK(f32 / f12 == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("transition strength selection rule and spectator weights") {
  auto t1 = preset("type1");
  const HalfInt I = t1.nuclear_spin;
  DressedEntry e{HalfInt(1), HalfInt(1), 1, 0.0, 1.0};
  // mF' must equal mJ + mI.
  CHECK(transition_strength(t1.i().J, HalfInt::from_int(3), HalfInt(0), e,
                            t1.r1().J, I) == 0.0);
  const double s_pair = transition_strength(
      t1.i().J, HalfInt::from_int(3), e.mJ + e.mI, e, t1.r1().J, I);
  DressedEntry spect = e;
  spect.s = 0;
  const double s_spect = transition_strength(
      t1.i().J, HalfInt::from_int(3), e.mJ + e.mI, spect, t1.r1().J, I);
  // A dressed pair member carries half the weight of the bare column.
  CHECK(s_pair == doctest::Approx(0.5 * s_spect).epsilon(1e-12));
}

TEST_CASE("explicit CG expansion matches the closed form for both presets") {
  CHECK(dressed_strength_residual(preset("type1")) < 1e-10);
  CHECK(dressed_strength_residual(preset("type2")) < 1e-10);
}

TEST_CASE("hyperfine mF block spectra") {
  auto t1 = preset("type1");
  const double rabi = 1.0e7;

  // mF = 1 couples r1 F=1..4 (4 states) and r2 F=1..3 (3 states): 7x7.
  auto evs = diagonalize_mF_block(t1, HalfInt::from_int(1), rabi);
  REQUIRE(evs.size() == 7);

  // Exactly five distinct values: 0 plus two +- pairs.
  std::vector<double> distinct;
  for (double v : evs) {
    bool found = false;
    for (double d : distinct)
      if (std::abs(v - d) < 1e-6 * rabi) found = true;
    if (!found) distinct.push_back(v);
  }
  CHECK(distinct.size() == 5);
  std::sort(distinct.begin(), distinct.end());
  CHECK(std::abs(distinct[2]) < 1e-9 * rabi);
  CHECK(distinct[0] == doctest::Approx(-distinct[4]).epsilon(1e-9));
  CHECK(distinct[1] == doctest::Approx(-distinct[3]).epsilon(1e-9));

  // Eigenvalues come back sorted ascending.
  CHECK(std::is_sorted(evs.begin(), evs.end()));

  // An mF carried by no Rydberg state throws.
  CHECK_THROWS_AS(diagonalize_mF_block(t1, HalfInt::from_int(9), rabi),
                  std::domain_error);
}

TEST_CASE("F-basis eigenvalues reproduce J-basis dressed shifts") {
  // Hyperfine coupling is omitted from the Rydberg block, so the fixed-mF
  // F-basis spectrum must be a re-sorting of the uncoupled-basis dressed
  // shifts with the same mF = mJ + mI.
  for (const char* name : {"type1", "type2"}) {
    auto lad = preset(name);
    const double rabi = 3.0e7;
    auto man = dress_rydberg_pair(lad, rabi, 0.0);
    // Collect every mF value present in the Rydberg manifolds.
    std::set<int> mf_values;
    for (const auto& e : man.entries) mf_values.insert((e.mJ + e.mI).twice());
    for (int tmf : mf_values) {
      std::vector<double> expect;
      for (const auto& e : man.entries)
        if ((e.mJ + e.mI).twice() == tmf) expect.push_back(e.energy_shift);
      // r2-only sublevels with this mF appear as extra zero eigenvalues.
      auto got = diagonalize_mF_block(lad, HalfInt(tmf), rabi);
      while (expect.size() < got.size()) expect.push_back(0.0);
      REQUIRE(got.size() == expect.size());
      std::sort(expect.begin(), expect.end());
      for (size_t k = 0; k < got.size(); ++k)
        CHECK(got[k] == doctest::Approx(expect[k]).epsilon(1e-10).scale(rabi));
    }
  }
}

TEST_CASE("central peak prediction") {
  auto t1 = preset("type1");
  auto t2 = preset("type2");
  auto ma = preset("model_atom");
  const double deg = 3.14159265358979323846 / 180.0;

  CHECK(predict_central_peak(t1, 0.0) == CentralFeature::absent);
  CHECK(predict_central_peak(t2, 0.0) == CentralFeature::dominant);
  CHECK(predict_central_peak(t1, 90.0 * deg) == CentralFeature::present);
  CHECK(predict_central_peak(t2, 90.0 * deg) == CentralFeature::present);
  CHECK(predict_central_peak(ma, 0.0) == CentralFeature::absent);
  CHECK(predict_central_peak(ma, 90.0 * deg) == CentralFeature::present);
  // Angle folding: theta = 180 deg behaves like 0.
  CHECK(predict_central_peak(t1, 180.0 * deg) == CentralFeature::absent);
}
