#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "rydpol/basis.hpp"
#include "rydpol/couplings.hpp"

namespace rydpol {

/// Decay-rate configuration, all in rad/s (angular frequency units).
struct RateConfig {
  double gamma_i = 2.0 * 3.14159265358979323846 * 6.07e6;  // D2 natural linewidth
  // A nonzero transit rate keeps every excited coherence damped, making the
  // steady state unique even when the coupling beam is off.
  double gamma_transit = 2.0 * 3.14159265358979323846 * 0.15e6;
  double gamma_collision = 0.0;
  double gamma_r1_rad = 0.0;
  double gamma_r2_rad = 0.0;
  double gamma_dummy = 0.0;  // 0 = auto: 1000 x largest other rate

  double resolved_gamma_dummy() const;
  void validate() const;  // throws std::domain_error on negative rates
};

/// One Lindblad collapse channel: sparse amplitude entries and a rate.
struct CollapseOperator {
  std::string label;
  double rate = 0.0;  // rad/s
  struct Entry {
    int row;    // final state index
    int col;    // initial state index
    double amplitude;
  };
  std::vector<Entry> entries;

  Eigen::MatrixXcd dense(int dim) const;
};

using DissipatorSpec = std::vector<CollapseOperator>;

/// Assembled steady-state problem over the enumerated basis.
struct DensityMatrixProblem {
  std::vector<HyperfineState> basis;
  Eigen::MatrixXcd hamiltonian;    // Hermitian, dummy row/column zero
  DissipatorSpec dissipator;
};

/// Block Hamiltonian: hbar/2-scaled detuning diagonal plus the three
/// field-coupling blocks (probe g-i, coupling i-r1, RF r1-r2). The scalar
/// radial Rabi of each field is normalized so it equals the Rabi frequency of
/// the block's strongest pi transition in the fine-structure basis.
Eigen::MatrixXcd build_hamiltonian(const LadderSpec& ladder, const FieldConfig& probe,
                                   const FieldConfig& coupling, const FieldConfig& rf);

/// Collapse operators: radiative i->g channels for q = -1, 0, +1; one
/// incoherent channel per excited sublevel into the dummy state; dummy->g
/// repopulation with equal weight per ground sublevel.
DissipatorSpec build_collapse_operators(const LadderSpec& ladder, const RateConfig& rates);

/// Vectorized Liouvillian, column-major stacking of rho (vec index = row + dim*col).
Eigen::SparseMatrix<Complex> liouvillian(const Eigen::MatrixXcd& H, const DissipatorSpec& D);

struct SteadyState {
  Eigen::MatrixXcd rho;
  double residual_norm = 0.0;   // ||L vec(rho)|| / ||L||_F
  double trace_error = 0.0;
  std::string solver;           // "direct", "cycle", "least_squares"
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reference solver: replaces one row of the Liouvillian with the trace
/// constraint and factorizes the resulting square sparse system.
SteadyState steady_state(const Eigen::SparseMatrix<Complex>& L);

/// Convenience: build Liouvillian from parts and solve.
SteadyState steady_state(const Eigen::MatrixXcd& H, const DissipatorSpec& D);

/// Fast exact solver for the sweep engine. Splits the Liouvillian into a
/// non-Hermitian-Hamiltonian flow (inverted through one dense
/// eigendecomposition) plus the jump refill map, whose range is confined to
/// the ground-manifold block and the dummy population; the steady state is
/// recovered from a small fixed-point system on that subspace. Falls back to
/// the direct solver when the spectral inversion is ill-conditioned.
class CycleSteadySolver {
 public:
  CycleSteadySolver(const std::vector<HyperfineState>& basis, const DissipatorSpec& D);

  SteadyState solve(const Eigen::MatrixXcd& H) const;

 private:
  int dim_;
  DissipatorSpec diss_;
  std::vector<int> targets_;   // jump-output support (g states + dummy)
  std::vector<int> sources_;   // jump-input support (excited states + dummy)
  Eigen::MatrixXcd damping_;   // -i/2 sum_k gamma_k C_k^dag C_k

  // Precomputed sparsity plans for the fixed-point system.
  struct Coord {
    int a, b;     // target positions, a <= b
    bool imag;
  };
  std::vector<Coord> coords_;              // real coordinates of the jump range
  std::vector<std::pair<int, int>> need_pairs_;  // source-position pairs read by R
  std::vector<int> mirror_;                // index of the transposed pair
  struct RTerm {
    int out_a, out_b;   // target positions
    int in_pair;        // index into need_pairs_
    double weight;      // gamma * amp1 * amp2
  };
  std::vector<RTerm> r_terms_;
};

/// Time evolution of the master equation (adaptive RK45); oracle for the
/// steady-state solver.
Eigen::MatrixXcd time_evolve(const Eigen::MatrixXcd& H, const DissipatorSpec& D,
                             const Eigen::MatrixXcd& rho0, double t,
                             double rel_tol = 1e-10);

/// Sparse triplet text dump (row, col, re, im per line) for external checks.
std::string sparse_triplet_dump(const Eigen::SparseMatrix<Complex>& M);

}  // namespace rydpol
