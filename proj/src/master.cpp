#include "rydpol/master.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rydpol {
namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<int> level_indices(const std::vector<HyperfineState>& basis, int level_index) {
  std::vector<int> out;
  for (size_t k = 0; k < basis.size(); ++k)
    if (basis[k].level_index == level_index) out.push_back(static_cast<int>(k));
  return out;
}

int dummy_index(const std::vector<HyperfineState>& basis) {
  for (size_t k = 0; k < basis.size(); ++k)
    if (basis[k].is_dummy()) return static_cast<int>(k);
  return -1;
}

/// Insert one field block into H. The coupling block is indexed
/// (upper, lower); H(upper, lower) gets half the block element.
void add_field_block(Eigen::MatrixXcd& H, const CouplingBlock& block,
                     const std::vector<int>& upper_idx, const std::vector<int>& lower_idx) {
  for (Eigen::Index a = 0; a < block.matrix.rows(); ++a)
    for (Eigen::Index b = 0; b < block.matrix.cols(); ++b) {
      Complex v = 0.5 * block.matrix(a, b);
      if (v == Complex(0.0)) continue;
      H(upper_idx[a], lower_idx[b]) += v;
      H(lower_idx[b], upper_idx[a]) += std::conj(v);
    }
}

FieldConfig normalized(const FieldConfig& field, const LevelSpec& lower,
                       const LevelSpec& upper) {
  double scale = max_pi_element(lower, upper);
  if (scale <= 0.0) throw std::domain_error("degenerate coupling block normalization");
  FieldConfig out = field;
  out.radial_rabi = field.radial_rabi / scale;
  return out;
}

double frobenius(const Eigen::SparseMatrix<Complex>& M) {
  double s = 0.0;
  for (int k = 0; k < M.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(M, k); it; ++it)
      s += std::norm(it.value());
  return std::sqrt(s);
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& x, int dim) {
  return Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim);
}

SteadyState finalize_state(Eigen::MatrixXcd rho, const Eigen::SparseMatrix<Complex>& L,
                           const std::string& solver) {
  SteadyState out;
  out.solver = solver;
  rho = 0.5 * (rho + rho.adjoint().eval());
  Complex tr = rho.trace();
  out.trace_error = std::abs(tr - 1.0);
  if (std::abs(tr) < 1e-12)
    throw SolverError("steady-state solve produced a traceless matrix");
  rho /= tr;
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  double lnorm = frobenius(L);
  out.residual_norm = (L * v).norm() / (lnorm > 0.0 ? lnorm : 1.0);
  out.rho = std::move(rho);
  return out;
}

}  // namespace

double RateConfig::resolved_gamma_dummy() const {
  if (gamma_dummy > 0.0) return gamma_dummy;
  double largest = std::max({gamma_i, gamma_transit, gamma_collision,
                             gamma_r1_rad, gamma_r2_rad});
  return 1000.0 * largest;
}

void RateConfig::validate() const {
  for (double r : {gamma_i, gamma_transit, gamma_collision, gamma_r1_rad,
                   gamma_r2_rad, gamma_dummy})
    if (r < 0.0 || !std::isfinite(r)) throw std::domain_error("decay rates must be finite and >= 0");
}

Eigen::MatrixXcd CollapseOperator::dense(int dim) const {
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : entries) C(e.row, e.col) += e.amplitude;
  return C;
}

Eigen::MatrixXcd build_hamiltonian(const LadderSpec& ladder, const FieldConfig& probe,
                                   const FieldConfig& coupling, const FieldConfig& rf) {
  ladder.validate();
  const auto basis = enumerate_basis(ladder);
  const int dim = static_cast<int>(basis.size());
  const HalfInt I = ladder.nuclear_spin;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);

  const double dp = probe.detuning, dc = coupling.detuning, drf = rf.detuning;
  const double diag_by_level[4] = {0.0, -dp, -(dp + dc), -(dp + dc + drf)};
  for (int k = 0; k < dim; ++k) {
    if (basis[k].is_dummy()) continue;
    int lev = basis[k].level_index;
    H(k, k) = diag_by_level[lev] + ladder.levels[lev].energy_offset;
  }

  std::vector<std::vector<int>> idx;
  for (int lev = 0; lev < 4; ++lev) idx.push_back(level_indices(basis, lev));

  add_field_block(H, coupling_operator(normalized(probe, ladder.g(), ladder.i()),
                                       ladder.g(), ladder.i(), I), idx[1], idx[0]);
  add_field_block(H, coupling_operator(normalized(coupling, ladder.i(), ladder.r1()),
                                       ladder.i(), ladder.r1(), I), idx[2], idx[1]);
  add_field_block(H, coupling_operator(normalized(rf, ladder.r1(), ladder.r2()),
                                       ladder.r1(), ladder.r2(), I), idx[3], idx[2]);
  return H;
}

DissipatorSpec build_collapse_operators(const LadderSpec& ladder, const RateConfig& rates) {
  ladder.validate();
  rates.validate();
  const auto basis = enumerate_basis(ladder);
  const HalfInt I = ladder.nuclear_spin;
  const auto g_idx = level_indices(basis, 0);
  const auto i_idx = level_indices(basis, 1);
  const int dummy = dummy_index(basis);
  DissipatorSpec out;

  // (a) Radiative decay i -> g, one channel per photon polarization. The
  // sqrt(2 L_i + 1) prefactor makes the squared amplitudes branching ratios
  // that sum to one over (q, final state).
  if (rates.gamma_i > 0.0) {
    const double pref = std::sqrt(2.0 * ladder.i().L + 1.0);
    for (int q = -1; q <= 1; ++q) {
      CollapseOperator op;
      op.label = "radiative_i_g_q" + std::to_string(q);
      op.rate = rates.gamma_i;
      for (int gi : g_idx)
        for (int ii : i_idx) {
          const auto& gs = basis[gi];
          const auto& is = basis[ii];
          if (is.mF.twice() - gs.mF.twice() != 2 * q) continue;
          double amp = pref * angular_element(ladder.g(), gs.F, gs.mF,
                                              ladder.i(), is.F, is.mF, q, I);
          if (amp != 0.0) op.entries.push_back({gi, ii, amp});
        }
      if (!op.entries.empty()) out.push_back(std::move(op));
    }
  }

  // (b) Incoherent loss from each atomic sublevel into the dummy state.
  // Transit exchange touches the ground manifold too: atoms leave the beam
  // from any state and are replaced by unpolarized ground-state atoms, which
  // is what keeps probe columns with dark sublevels absorbing.
  const double loss_i = rates.gamma_transit + rates.gamma_collision;
  const double loss_by_level[4] = {rates.gamma_transit, loss_i,
                                   loss_i + rates.gamma_r1_rad,
                                   loss_i + rates.gamma_r2_rad};
  bool any_loss = rates.gamma_transit > 0.0 || loss_i > 0.0 ||
                  rates.gamma_r1_rad > 0.0 || rates.gamma_r2_rad > 0.0;
  if (any_loss && dummy < 0)
    throw std::domain_error("incoherent loss rates require the dummy state");
  if (dummy >= 0) {
    for (size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].is_dummy()) continue;
      double rate = loss_by_level[basis[k].level_index];
      if (rate <= 0.0) continue;
      CollapseOperator op;
      op.label = "loss_to_dummy_" + std::to_string(k);
      op.rate = rate;
      op.entries.push_back({dummy, static_cast<int>(k), 1.0});
      out.push_back(std::move(op));
    }
    // (c) Fast repopulation dummy -> g, equal weight per ground sublevel.
    // Separate channels keep the refill incoherent.
    double gd = rates.resolved_gamma_dummy();
    if (gd > 0.0 && any_loss) {
      const double amp = 1.0 / std::sqrt(static_cast<double>(g_idx.size()));
      for (int gi : g_idx) {
        CollapseOperator op;
        op.label = "dummy_refill_" + std::to_string(gi);
        op.rate = gd;
        op.entries.push_back({gi, dummy, amp});
        out.push_back(std::move(op));
      }
    }
  }
  return out;
}

Eigen::SparseMatrix<Complex> liouvillian(const Eigen::MatrixXcd& H, const DissipatorSpec& D) {
  const int n = static_cast<int>(H.rows());
  const int n2 = n * n;
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(n2) * 8);

  // Coherent part: -i (H rho - rho H), column-major vec index = row + n*col.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (H(i, k) != Complex(0.0)) trip.emplace_back(i + n * j, k + n * j, -kI * H(i, k));
        if (H(k, j) != Complex(0.0)) trip.emplace_back(i + n * j, i + n * k, kI * H(k, j));
      }

  for (const auto& op : D) {
    if (op.rate <= 0.0) continue;
    // gamma * C rho C^dag
    for (const auto& a : op.entries)
      for (const auto& b : op.entries)
        trip.emplace_back(a.row + n * b.row, a.col + n * b.col,
                          Complex(op.rate * a.amplitude * b.amplitude, 0.0));
    // -(gamma/2) {C^dag C, rho}
    Eigen::MatrixXcd CdC = op.dense(n);
    CdC = (CdC.adjoint() * CdC).eval();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (CdC(i, k) == Complex(0.0)) continue;
        Complex v = -0.5 * op.rate * CdC(i, k);
        for (int j = 0; j < n; ++j) {
          trip.emplace_back(i + n * j, k + n * j, v);
          trip.emplace_back(j + n * i, j + n * k, std::conj(v));
        }
      }
  }

  Eigen::SparseMatrix<Complex> L(n2, n2);
  L.setFromTriplets(trip.begin(), trip.end());
  L.prune([](int, int, const Complex& v) { return v != Complex(0.0); });
  return L;
}

SteadyState steady_state(const Eigen::SparseMatrix<Complex>& L) {
  const int n2 = static_cast<int>(L.rows());
  const int dim = static_cast<int>(std::lround(std::sqrt(double(n2))));
  if (dim * dim != n2) throw std::invalid_argument("Liouvillian is not dim^2 x dim^2");

  // Replace the first row by the trace constraint.
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(L.nonZeros()) + dim);
  for (int k = 0; k < L.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(L, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (int d = 0; d < dim; ++d) trip.emplace_back(0, d + dim * d, Complex(1.0, 0.0));
  Eigen::SparseMatrix<Complex> A(n2, n2);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n2);
  b(0) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() == Eigen::Success) {
    Eigen::VectorXcd x = lu.solve(b);
    if (lu.info() == Eigen::Success) {
      SteadyState s = finalize_state(unvec(x, dim), L, "direct");
      double lnorm = frobenius(L);
      if (s.residual_norm * (lnorm > 0 ? lnorm : 1.0) <= 1e-9 * std::max(lnorm, 1.0) ||
          s.residual_norm <= 1e-9)
        return s;
    }
  }

  // Singular beyond the trace constraint (e.g. undriven ladder): take the
  // minimum-norm solution of the stacked system, which selects the symmetric
  // member of the steady family.
  Eigen::MatrixXcd Ad = Eigen::MatrixXcd::Zero(n2 + 1, n2);
  for (int k = 0; k < L.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(L, k); it; ++it)
      Ad(it.row(), it.col()) = it.value();
  for (int d = 0; d < dim; ++d) Ad(n2, d + dim * d) = 1.0;
  Eigen::VectorXcd bd = Eigen::VectorXcd::Zero(n2 + 1);
  bd(n2) = 1.0;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(Ad);
  Eigen::VectorXcd x = cod.solve(bd);
  SteadyState s = finalize_state(unvec(x, dim), L, "least_squares");
  if (s.residual_norm > 1e-8)
    throw SolverError("steady-state residual " + std::to_string(s.residual_norm) +
                      " exceeds tolerance; system may have no steady state");
  return s;
}

SteadyState steady_state(const Eigen::MatrixXcd& H, const DissipatorSpec& D) {
  return steady_state(liouvillian(H, D));
}

CycleSteadySolver::CycleSteadySolver(const std::vector<HyperfineState>& basis,
                                     const DissipatorSpec& D)
    : dim_(static_cast<int>(basis.size())), diss_(D) {
  std::vector<char> is_target(dim_, 0), is_source(dim_, 0);
  for (const auto& op : diss_) {
    if (op.rate <= 0.0) continue;
    for (const auto& e : op.entries) {
      is_target[e.row] = 1;
      is_source[e.col] = 1;
    }
  }
  for (int k = 0; k < dim_; ++k) {
    if (is_target[k]) targets_.push_back(k);
    if (is_source[k]) sources_.push_back(k);
  }
  if (targets_.empty()) throw std::invalid_argument("dissipator has no jump channels");

  damping_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& op : diss_) {
    if (op.rate <= 0.0) continue;
    Eigen::MatrixXcd C = op.dense(dim_);
    damping_ -= (0.5 * kI * op.rate) * (C.adjoint() * C);
  }

  std::vector<int> src_pos(dim_, -1), tgt_pos(dim_, -1);
  for (size_t s = 0; s < sources_.size(); ++s) src_pos[sources_[s]] = static_cast<int>(s);
  for (size_t t = 0; t < targets_.size(); ++t) tgt_pos[targets_[t]] = static_cast<int>(t);

  // Source pairs the refill map reads, closed under transposition, and the
  // refill terms routed through them.
  std::map<std::pair<int, int>, int> pair_index;
  auto pair_id = [&](int s1, int s2) {
    auto [it, inserted] = pair_index.emplace(std::make_pair(s1, s2),
                                             static_cast<int>(need_pairs_.size()));
    if (inserted) need_pairs_.emplace_back(s1, s2);
    return it->second;
  };
  std::set<std::pair<int, int>> out_pairs;
  for (const auto& op : diss_) {
    if (op.rate <= 0.0) continue;
    for (const auto& e1 : op.entries)
      for (const auto& e2 : op.entries) {
        int in = pair_id(src_pos[e1.col], src_pos[e2.col]);
        pair_id(src_pos[e2.col], src_pos[e1.col]);  // keep the set symmetric
        int a = tgt_pos[e1.row], b = tgt_pos[e2.row];
        r_terms_.push_back({a, b, in, op.rate * e1.amplitude * e2.amplitude});
        out_pairs.emplace(std::min(a, b), std::max(a, b));
      }
  }
  mirror_.resize(need_pairs_.size());
  for (size_t p = 0; p < need_pairs_.size(); ++p)
    mirror_[p] = pair_index.at({need_pairs_[p].second, need_pairs_[p].first});

  for (const auto& [a, b] : out_pairs) {
    coords_.push_back({a, b, false});
    if (a != b) coords_.push_back({a, b, true});
  }
}

SteadyState CycleSteadySolver::solve(const Eigen::MatrixXcd& H) const {
  const int n = dim_;
  const int nt = static_cast<int>(targets_.size());
  const int ns = static_cast<int>(sources_.size());
  const int m = static_cast<int>(coords_.size());
  const int np = static_cast<int>(need_pairs_.size());

  // Spectral factorization of the non-Hermitian flow generator.
  const Eigen::MatrixXcd H_eff = H + damping_;
  Eigen::MatrixXcd V = H_eff;
  Eigen::VectorXcd lam(n);
  {
    Eigen::MatrixXcd work(n, n);
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, V.data(), n, lam.data(),
                             nullptr, 1, work.data(), n);
    if (info != 0) return steady_state(H, diss_);
    V = work;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> vlu(V);
  Eigen::MatrixXcd G = vlu.solve(Eigen::MatrixXcd::Identity(n, n));

  // Componentwise inverse of the flow in the eigenbasis:
  // K(X) = -i(H_eff X - X H_eff^dag) acts as multiplication by
  // -i(lam_a - conj(lam_b)); degenerate denominators mean an undamped
  // coherence, which this factorization cannot invert.
  Eigen::MatrixXcd Dinv(n, n);
  const double scale = lam.cwiseAbs().maxCoeff();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex den = -kI * (lam(a) - std::conj(lam(b)));
      if (std::abs(den) < 1e-12 * std::max(scale, 1.0)) return steady_state(H, diss_);
      Dinv(a, b) = 1.0 / den;
    }

  // K^{-1}(e_a e_b^dag) element (c1, c2) = m_{c1,a} . Dinv . conj(m_{c2,b})
  // with m_{c,t}(p) = V(c,p) * G(p, t). Batch the Dinv contraction as one
  // product over all (source, target) columns.
  Eigen::MatrixXcd Mm(n, ns * nt);
  for (int s = 0; s < ns; ++s)
    for (int t = 0; t < nt; ++t)
      Mm.col(s * nt + t) =
          V.row(sources_[s]).transpose().cwiseProduct(G.col(targets_[t]));
  Eigen::MatrixXcd Q = Dinv * Mm.conjugate();

  // Column j of N: coordinates of R(-K^{-1} E_j) on the jump-range basis.
  Eigen::MatrixXd N(m, m);
  Eigen::VectorXcd X(np), Y(np);
  int prev_a = -1, prev_b = -1;
  for (int j = 0; j < m; ++j) {
    const auto& c = coords_[j];
    if (c.a != prev_a || c.b != prev_b) {
      for (int p = 0; p < np; ++p) {
        auto [s1, s2] = need_pairs_[p];
        X(p) = (Mm.col(s1 * nt + c.a).transpose() * Q.col(s2 * nt + c.b))(0);
      }
      prev_a = c.a;
      prev_b = c.b;
    }
    // E_j = e_a e_a^dag (diag), e_a e_b^dag + h.c. (re) or i(e_a e_b^dag) + h.c.
    // (im); K^{-1} commutes with Hermitian conjugation.
    if (c.a == c.b) {
      for (int p = 0; p < np; ++p) Y(p) = -X(p);
    } else if (!c.imag) {
      for (int p = 0; p < np; ++p) Y(p) = -(X(p) + std::conj(X(mirror_[p])));
    } else {
      for (int p = 0; p < np; ++p) Y(p) = -kI * (X(p) - std::conj(X(mirror_[p])));
    }
    Eigen::MatrixXcd Rw = Eigen::MatrixXcd::Zero(nt, nt);
    for (const auto& term : r_terms_)
      Rw(term.out_a, term.out_b) += term.weight * Y(term.in_pair);
    for (int k2 = 0; k2 < m; ++k2) {
      const auto& ck = coords_[k2];
      Complex v = Rw(ck.a, ck.b);
      N(k2, j) = ck.imag ? v.imag() : v.real();
    }
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - N;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (m >= 2 && sv(m - 2) < 1e-8 * std::max(sv(0), 1.0)) return steady_state(H, diss_);
  Eigen::VectorXd y = svd.matrixV().col(m - 1);

  // Reassemble the fixed-point refill w and apply -K^{-1} once for rho;
  // w is supported on the target block, so G w G^dag is built low-rank.
  Eigen::MatrixXcd w_t = Eigen::MatrixXcd::Zero(nt, nt);
  for (int j = 0; j < m; ++j) {
    const auto& c = coords_[j];
    if (c.a == c.b) {
      w_t(c.a, c.a) += y(j);
    } else if (!c.imag) {
      w_t(c.a, c.b) += y(j);
      w_t(c.b, c.a) += y(j);
    } else {
      w_t(c.a, c.b) += kI * y(j);
      w_t(c.b, c.a) -= kI * y(j);
    }
  }
  Eigen::MatrixXcd G_t(n, nt);
  for (int t = 0; t < nt; ++t) G_t.col(t) = G.col(targets_[t]);
  Eigen::MatrixXcd wt = ((G_t * w_t) * G_t.adjoint()).cwiseProduct(Dinv);
  Eigen::MatrixXcd rho = -(V * wt) * V.adjoint();

  rho = 0.5 * (rho + rho.adjoint().eval());
  Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) return steady_state(H, diss_);
  rho /= tr;

  // Residual of the full generator; fall back to the direct solver on
  // disagreement.
  Eigen::MatrixXcd resid = -kI * (H_eff * rho - rho * H_eff.adjoint());
  for (const auto& op : diss_) {
    if (op.rate <= 0.0) continue;
    for (const auto& e1 : op.entries)
      for (const auto& e2 : op.entries)
        resid(e1.row, e2.row) += op.rate * e1.amplitude * e2.amplitude *
                                 rho(e1.col, e2.col);
  }
  double res_scale = H.norm() + 1.0;
  for (const auto& op : diss_) res_scale += op.rate;
  double rel = resid.norm() / res_scale;
  if (!(rel < 1e-8)) return steady_state(H, diss_);

  SteadyState out;
  out.rho = std::move(rho);
  out.residual_norm = rel;
  out.trace_error = std::abs(tr - 1.0);
  out.solver = "cycle";
  return out;
}

Eigen::MatrixXcd time_evolve(const Eigen::MatrixXcd& H, const DissipatorSpec& D,
                             const Eigen::MatrixXcd& rho0, double t, double rel_tol) {
  const int n = static_cast<int>(H.rows());
  if (rho0.rows() != n || rho0.cols() != n)
    throw std::invalid_argument("initial state dimension mismatch");
  std::vector<Eigen::MatrixXcd> C, CdC;
  for (const auto& op : D) {
    if (op.rate <= 0.0) continue;
    C.push_back(std::sqrt(op.rate) * op.dense(n));
    CdC.push_back(C.back().adjoint() * C.back());
  }

  auto deriv = [&](const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd d = -kI * (H * rho - rho * H);
    for (size_t k = 0; k < C.size(); ++k)
      d += C[k] * rho * C[k].adjoint() - 0.5 * (CdC[k] * rho + rho * CdC[k]);
    return d;
  };

  // Dormand-Prince 5(4) with adaptive step size.
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double rate_scale = H.cwiseAbs().maxCoeff();
  for (const auto& op : D) rate_scale = std::max(rate_scale, op.rate);
  double h = (rate_scale > 0.0) ? 0.1 / rate_scale : t;
  h = std::min(h, t);
  Eigen::MatrixXcd rho = rho0;
  double time = 0.0;

  while (time < t) {
    if (time + h > t) h = t - time;
    Eigen::MatrixXcd k1 = deriv(rho);
    Eigen::MatrixXcd k2 = deriv(rho + h * a21 * k1);
    Eigen::MatrixXcd k3 = deriv(rho + h * (a31 * k1 + a32 * k2));
    Eigen::MatrixXcd k4 = deriv(rho + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Eigen::MatrixXcd k5 = deriv(rho + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Eigen::MatrixXcd k6 = deriv(rho + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::MatrixXcd next = rho + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Eigen::MatrixXcd k7 = deriv(next);
    Eigen::MatrixXcd err_m =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = err_m.norm() / std::max(rho.norm(), 1e-30);
    double tol = std::max(rel_tol, 1e-14);
    if (err <= tol || h <= 1e-16 * t) {
      rho = next;
      time += h;
    }
    double factor = (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return rho;
}

std::string sparse_triplet_dump(const Eigen::SparseMatrix<Complex>& M) {
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < M.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(M, k); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
         << it.value().imag() << '\n';
  return os.str();
}

}  // namespace rydpol
