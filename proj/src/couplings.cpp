#include "rydpol/couplings.hpp"

#include <cmath>
#include <stdexcept>

#include "rydpol/angular.hpp"

namespace rydpol {
namespace {

constexpr double kNormTol = 1e-12;

std::vector<HyperfineState> level_states(const LevelSpec& level, HalfInt I, int level_index) {
  std::vector<HyperfineState> states;
  for (HalfInt F : level_f_values(level, I))
    for (int tm = -F.twice(); tm <= F.twice(); tm += 2)
      states.push_back({level_index, F, HalfInt(tm)});
  return states;
}

void require_laporte(const LevelSpec& lower, const LevelSpec& upper) {
  if (std::abs(upper.L - lower.L) != 1)
    throw std::domain_error("dipole-forbidden pair " + lower.label + " <-> " + upper.label +
                            " (|dL| != 1)");
}

}  // namespace

Polarization::Polarization(Complex x, Complex y, Complex z) : ex(x), ey(y), ez(z) {
  double n2 = std::norm(ex) + std::norm(ey) + std::norm(ez);
  if (std::abs(n2 - 1.0) > kNormTol)
    throw std::domain_error("polarization vector is not normalized");
}

Polarization Polarization::linear_at_angle(double theta) {
  return Polarization(0.0, std::sin(theta), std::cos(theta));
}

std::array<Complex, 3> spherical_coefficients(const Polarization& p) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  Complex a_minus = inv_sqrt2 * (p.ex - i * p.ey);
  Complex a_zero = p.ez;
  Complex a_plus = -inv_sqrt2 * (p.ex + i * p.ey);
  return {a_minus, a_zero, a_plus};
}

double angular_element(const LevelSpec& lower, HalfInt F, HalfInt mF,
                       const LevelSpec& upper, HalfInt Fp, HalfInt mFp,
                       int q, HalfInt I) {
  // Wigner-Eckart chain with the reduced matrix element absorbed into the
  // radial Rabi frequency. Unprimed quantum numbers are the lower state.
  const HalfInt one(2);
  const HalfInt L = HalfInt::from_int(lower.L), Lp = HalfInt::from_int(upper.L);
  const HalfInt S = lower.S, J = lower.J, Jp = upper.J;

  int phase_twice = 2 + Lp.twice() + S.twice() + J.twice() + Jp.twice() + I.twice() - mFp.twice();
  if (phase_twice % 2 != 0)
    throw std::logic_error("non-integer phase exponent in angular element");
  const double sign = ((phase_twice / 2) % 2 == 0) ? 1.0 : -1.0;

  const double scale = std::sqrt((J.twice() + 1.0) * (Jp.twice() + 1.0) *
                                 (F.twice() + 1.0) * (Fp.twice() + 1.0));
  return sign * scale *
         wigner_6j(Lp, Jp, lower.S, J, L, one) *
         wigner_6j(Jp, Fp, I, F, J, one) *
         wigner_3j(F, one, Fp, mF, HalfInt::from_int(q), -mFp);
}

CouplingBlock angular_matrix(const LevelSpec& lower, const LevelSpec& upper,
                             int q, HalfInt I) {
  require_laporte(lower, upper);
  CouplingBlock block;
  block.lower_states = level_states(lower, I, 0);
  block.upper_states = level_states(upper, I, 1);
  block.matrix = Eigen::MatrixXcd::Zero(block.upper_states.size(), block.lower_states.size());
  for (size_t a = 0; a < block.upper_states.size(); ++a) {
    const auto& up = block.upper_states[a];
    for (size_t b = 0; b < block.lower_states.size(); ++b) {
      const auto& lo = block.lower_states[b];
      if (up.mF.twice() - lo.mF.twice() != 2 * q) continue;
      block.matrix(a, b) = angular_element(lower, lo.F, lo.mF, upper, up.F, up.mF, q, I);
    }
  }
  return block;
}

CouplingBlock coupling_operator(const FieldConfig& field, const LevelSpec& lower,
                                const LevelSpec& upper, HalfInt I) {
  if (field.radial_rabi < 0.0) throw std::domain_error("radial Rabi amplitude must be >= 0");
  auto coeffs = spherical_coefficients(field.polarization);
  CouplingBlock block = angular_matrix(lower, upper, -1, I);
  // Block convention: element (upper, lower) carries conj(A^(q)), so that the
  // (lower, upper) slot of the block Hamiltonian is A^(q)-weighted as written.
  block.matrix *= std::conj(coeffs[0]);
  for (int q = 0; q <= 1; ++q) {
    CouplingBlock part = angular_matrix(lower, upper, q, I);
    block.matrix += std::conj(coeffs[q + 1]) * part.matrix;
  }
  block.matrix *= field.radial_rabi;
  return block;
}

double max_pi_element(const LevelSpec& lower, const LevelSpec& upper) {
  LevelSpec lo = lower, up = upper;
  lo.F_resolved.reset();
  up.F_resolved.reset();
  CouplingBlock fine = angular_matrix(lo, up, 0, HalfInt(0));
  return fine.matrix.cwiseAbs().maxCoeff();
}

}  // namespace rydpol
