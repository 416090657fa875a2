#pragma once

#include <vector>

#include "rydpol/basis.hpp"
#include "rydpol/half_int.hpp"

namespace rydpol {

/// One member of the RF-dressed Rydberg manifold at parallel polarization.
/// s = +1/-1 labels the symmetric/antisymmetric dressed pair of a coupled
/// mJ column; s = 0 marks a spectator (undressed) state.
struct DressedEntry {
  HalfInt mJ;
  HalfInt mI;
  int s = 0;
  double energy_shift = 0.0;   // rad/s, relative to the bare r1 level
  double pair_rabi = 0.0;      // effective Rabi frequency of this mJ column
};

struct DressedManifold {
  HalfInt J1;                  // lower Rydberg level
  HalfInt J2;                  // upper Rydberg level
  HalfInt I;
  double rf_rabi = 0.0;        // rad/s, strongest-column normalization
  double rf_detuning = 0.0;    // rad/s
  std::vector<DressedEntry> entries;
};

/// Analytic dressed states of the r1-r2 pair under a pi-polarized RF field.
/// The scalar rf_rabi is the Rabi frequency of the strongest mJ column; the
/// other columns scale by their angular-factor ratio.
DressedManifold dress_rydberg_pair(const LadderSpec& ladder, double rf_rabi,
                                   double rf_detuning = 0.0);

/// Relative optical strength of the i -> dressed-state transition: the
/// 2^{-|s|}-weighted product of squared 3j factors that survives the
/// uncoupled-basis expansion. Zero unless mF' = mJ + mI.
double transition_strength(HalfInt Jp, HalfInt Fp, HalfInt mFp,
                           const DressedEntry& entry, HalfInt J, HalfInt I);

/// Residual between the explicit Clebsch-Gordan expansion of the dressed
/// transition strength and its closed two-3j form, maximized over the i-level
/// sublevels and the dressed manifold. Machine-zero when the angular algebra
/// is consistent.
double dressed_strength_residual(const LadderSpec& ladder);

/// Hyperfine dressing spectrum: eigenvalues of the r1+r2 block with fixed mF
/// under a pi-polarized RF field at resonance, sorted ascending. Throws
/// std::domain_error when no Rydberg state carries that mF.
std::vector<double> diagonalize_mF_block(const LadderSpec& ladder, HalfInt mF,
                                         double rf_rabi);

enum class CentralFeature { absent, present, dominant };

/// Qualitative prediction for the undressed (central) spectroscopic line at
/// RF polarization angle theta (radians) from the quantization axis.
CentralFeature predict_central_peak(const LadderSpec& ladder, double theta);

}  // namespace rydpol
