#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rydpol/angular.hpp"
#include "rydpol/basis.hpp"
#include "rydpol/couplings.hpp"

using namespace rydpol;

TEST_CASE("polarization construction and spherical decomposition") {
  CHECK_THROWS_AS(Polarization(1.0, 1.0, 0.0), std::domain_error);

  // z-linear: only q=0 survives.
  auto cz = spherical_coefficients(Polarization(0.0, 0.0, 1.0));
  CHECK(std::abs(cz[0]) == doctest::Approx(0.0).scale(1.0));
  CHECK(cz[1] == Complex(1.0, 0.0));
  CHECK(std::abs(cz[2]) == doctest::Approx(0.0).scale(1.0));

  // x-linear: equal-weight q = +-1, A(-1) = 1/sqrt(2), A(+1) = -1/sqrt(2).
  auto cx = spherical_coefficients(Polarization(1.0, 0.0, 0.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(cx[0].real() == doctest::Approx(r).epsilon(1e-14));
  CHECK(cx[2].real() == doctest::Approx(-r).epsilon(1e-14));
  CHECK(std::abs(cx[1]) == doctest::Approx(0.0).scale(1.0));

  // Circular (ex + i ey)/sqrt(2): a single spherical component survives.
  auto cp = spherical_coefficients(Polarization(r, Complex(0.0, r), 0.0));
  CHECK(std::abs(cp[0]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(cp[1]) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(cp[2]) == doctest::Approx(0.0).scale(1.0));

  // Spherical weights always carry unit total weight.
  for (double th : {0.0, 0.3, 1.1, 2.0}) {
    auto c = spherical_coefficients(Polarization::linear_at_angle(th));
    double tot = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
    CHECK(tot == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("angular_matrix enforces selection rules") {
  auto t1 = preset("type1");
  CHECK_THROWS_AS(angular_matrix(t1.g(), t1.r1(), 0, t1.nuclear_spin),
                  std::domain_error);  // L: 0 -> 2 violates Laporte

  auto blk = angular_matrix(t1.g(), t1.i(), 1, t1.nuclear_spin);
  REQUIRE(blk.matrix.rows() == 7);
  REQUIRE(blk.matrix.cols() == 5);
  for (int a = 0; a < blk.matrix.rows(); ++a)
    for (int b = 0; b < blk.matrix.cols(); ++b) {
      const auto& up = blk.upper_states[a];
      const auto& lo = blk.lower_states[b];
      if (up.mF.twice() - lo.mF.twice() != 2)
        CHECK(std::abs(blk.matrix(a, b)) == 0.0);
    }
}

TEST_CASE("angular elements reduce to 3j projections for I = 0") {
  // With no nuclear spin the hyperfine machinery must collapse to the bare
  // fine-structure Wigner-Eckart factor; check the ratio between two pi
  // elements against the explicit 3j ratio.
  auto ma = preset("model_atom");
  const auto& lower = ma.g();   // J = 1
  const auto& upper = ma.i();   // J = 0
  const HalfInt I = ma.nuclear_spin;
  const double e0 = angular_element(lower, lower.J, HalfInt(0), upper, upper.J,
                                    HalfInt(0), 0, I);
  // J=1 -> J'=0 pi transition: only mJ = 0 couples.
  CHECK(std::abs(e0) > 0.1);
  const double e1 = angular_element(lower, lower.J, HalfInt(2), upper, upper.J,
                                    HalfInt(2), 0, I);
  CHECK(e1 == 0.0);
}

TEST_CASE("coupling operator scales with radial Rabi and polarization") {
  auto t1 = preset("type1");
  FieldConfig f;
  f.polarization = Polarization::linear_at_angle(0.0);
  f.radial_rabi = 2.0e6;

  auto blk = coupling_operator(f, t1.g(), t1.i(), t1.nuclear_spin);
  FieldConfig f2 = f;
  f2.radial_rabi = 4.0e6;
  auto blk2 = coupling_operator(f2, t1.g(), t1.i(), t1.nuclear_spin);
  CHECK((blk2.matrix - 2.0 * blk.matrix).norm() ==
        doctest::Approx(0.0).scale(blk.matrix.norm()).epsilon(1e-14));

  // theta = 0 keeps only pi couplings.
  for (int a = 0; a < blk.matrix.rows(); ++a)
    for (int b = 0; b < blk.matrix.cols(); ++b)
      if (blk.upper_states[a].mF != blk.lower_states[b].mF)
        CHECK(std::abs(blk.matrix(a, b)) == 0.0);
}

TEST_CASE("rotational covariance: total coupling strength is angle independent") {
  // The Frobenius norm of the full coupling block must not depend on the
  // linear polarization angle (rotating the field only redistributes weight
  // across spherical components).
  auto t1 = preset("type1");
  FieldConfig f;
  f.radial_rabi = 1.0;
  f.polarization = Polarization::linear_at_angle(0.0);
  const double base =
      coupling_operator(f, t1.r1(), t1.r2(), t1.nuclear_spin).matrix.norm();
  for (double th : {0.2, 0.8, 1.5707963, 2.4}) {
    f.polarization = Polarization::linear_at_angle(th);
    const double n =
        coupling_operator(f, t1.r1(), t1.r2(), t1.nuclear_spin).matrix.norm();
    CHECK(n == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("max_pi_element matches the strongest stretched transition") {
  // For the model atom (I=0, J=1 -> J=0) the only pi element is
  // 3j(0,1,1; 0,0,0) * sqrt(3 * 1) in magnitude = 1/sqrt(3) * sqrt(3) = 1...
  // rather than hard-coding the convention, just require consistency: the
  // normalized block built by the Hamiltonian assembly divides by this value,
  // so it must equal the largest |q=0 element| of the fine-structure block.
  auto ma = preset("model_atom");
  const double m = max_pi_element(ma.g(), ma.i());
  LevelSpec lo = ma.g();
  LevelSpec up = ma.i();
  lo.F_resolved.reset();
  up.F_resolved.reset();
  auto blk = angular_matrix(lo, up, 0, HalfInt(0));
  CHECK(m == doctest::Approx(blk.matrix.cwiseAbs().maxCoeff()).epsilon(1e-14));
  CHECK(m > 0.0);
}

TEST_CASE("pi matrix elements of the D5/2 to P3/2 block show the sqrt(2/3) pair") {
  // Fine-structure check (I = 0): |<J'=3/2 mJ=3/2| u0 |J=5/2 mJ=3/2>| over
  // |<J'=3/2 mJ=1/2| u0 |J=5/2 mJ=1/2>| follows from the 3j column ratio.
  auto t1 = preset("type1");
  LevelSpec lo = t1.r1();
  LevelSpec up = t1.r2();
  lo.F_resolved.reset();
  up.F_resolved.reset();
  auto blk = angular_matrix(lo, up, 0, HalfInt(0));
  double e32 = 0.0, e12 = 0.0;
  for (int a = 0; a < blk.matrix.rows(); ++a)
    for (int b = 0; b < blk.matrix.cols(); ++b) {
      if (blk.upper_states[a].mF.twice() == 3 &&
          blk.lower_states[b].mF.twice() == 3)
        e32 = std::abs(blk.matrix(a, b));
      if (blk.upper_states[a].mF.twice() == 1 &&
          blk.lower_states[b].mF.twice() == 1)
        e12 = std::abs(blk.matrix(a, b));
    }
  REQUIRE(e12 > 0.0);
  CHECK(e32 / e12 == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}
