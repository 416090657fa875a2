#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "rydpol/basis.hpp"

namespace rydpol {

using Complex = std::complex<double>;

/// Unit polarization vector of a driving field, Cartesian components.
struct Polarization {
  Complex ex{0.0}, ey{0.0}, ez{1.0};

  Polarization() = default;
  Polarization(Complex x, Complex y, Complex z);  // throws if not unit norm

  /// Linear polarization at angle theta (radians) from the quantization axis
  /// in the z-y plane: (0, sin(theta), cos(theta)).
  static Polarization linear_at_angle(double theta);
};

/// One driving field: polarization, radial Rabi amplitude, detuning (rad/s).
struct FieldConfig {
  Polarization polarization;
  double radial_rabi = 0.0;   // rad/s, >= 0
  double detuning = 0.0;      // rad/s
};

/// Spherical coefficients (A^(-1), A^(0), A^(+1)) of a unit polarization.
std::array<Complex, 3> spherical_coefficients(const Polarization& p);

/// Coupling block between two adjacent levels, indexed
/// (upper-manifold state, lower-manifold state).
struct CouplingBlock {
  Eigen::MatrixXcd matrix;
  std::vector<HyperfineState> upper_states;
  std::vector<HyperfineState> lower_states;
};

/// Angular matrix u^(q) for a dipole transition lower -> upper, built from
/// Wigner-Eckart factors. Throws std::domain_error when |L_upper - L_lower|
/// != 1 (Laporte rule).
CouplingBlock angular_matrix(const LevelSpec& lower, const LevelSpec& upper,
                             int q, HalfInt I);

/// Full Rabi coupling block: radial_rabi * sum_q A^(q) u^(q).
CouplingBlock coupling_operator(const FieldConfig& field, const LevelSpec& lower,
                                const LevelSpec& upper, HalfInt I);

/// Largest |pi matrix element| of the lower<->upper angular matrix in the
/// fine-structure basis (I treated as 0). Defines the normalization that maps
/// the scalar "RF Rabi frequency" knob onto the strongest transition.
double max_pi_element(const LevelSpec& lower, const LevelSpec& upper);

/// Scalar amplitude of the single u^(q) element between two specific states;
/// used for collapse operators and tests. States are (level, F, mF) with the
/// unprimed/lower state first.
double angular_element(const LevelSpec& lower, HalfInt F, HalfInt mF,
                       const LevelSpec& upper, HalfInt Fp, HalfInt mFp,
                       int q, HalfInt I);

}  // namespace rydpol
