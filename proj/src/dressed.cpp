#include "rydpol/dressed.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "rydpol/angular.hpp"
#include "rydpol/couplings.hpp"

namespace rydpol {
namespace {

LevelSpec fine(const LevelSpec& level) {
  LevelSpec out = level;
  out.F_resolved.reset();
  return out;
}

/// pi angular factor between |J1 mJ> and |J2 mJ> in the fine-structure basis.
double fine_pi_element(const LevelSpec& r1, const LevelSpec& r2, HalfInt mJ) {
  if (mJ.abs() > r2.J || mJ.abs() > r1.J) return 0.0;
  return angular_element(fine(r1), r1.J, mJ, fine(r2), r2.J, mJ, 0, HalfInt(0));
}

}  // namespace

DressedManifold dress_rydberg_pair(const LadderSpec& ladder, double rf_rabi,
                                   double rf_detuning) {
  ladder.validate();
  if (rf_rabi < 0.0) throw std::domain_error("RF Rabi frequency must be >= 0");
  const LevelSpec& r1 = ladder.r1();
  const LevelSpec& r2 = ladder.r2();
  const HalfInt I = ladder.nuclear_spin;

  DressedManifold out;
  out.J1 = r1.J;
  out.J2 = r2.J;
  out.I = I;
  out.rf_rabi = rf_rabi;
  out.rf_detuning = rf_detuning;

  const double max_e = max_pi_element(r1, r2);
  for (int tmj = -r1.J.twice(); tmj <= r1.J.twice(); tmj += 2) {
    HalfInt mJ(tmj);
    double e = fine_pi_element(r1, r2, mJ);
    for (int tmi = -I.twice(); tmi <= I.twice(); tmi += 2) {
      HalfInt mI(tmi);
      if (e == 0.0) {
        out.entries.push_back({mJ, mI, 0, 0.0, 0.0});
        continue;
      }
      double omega = rf_rabi * std::abs(e) / max_e;
      double root = std::sqrt(rf_detuning * rf_detuning + omega * omega);
      out.entries.push_back({mJ, mI, +1, 0.5 * (-rf_detuning + root), omega});
      out.entries.push_back({mJ, mI, -1, 0.5 * (-rf_detuning - root), omega});
    }
  }
  return out;
}

double transition_strength(HalfInt Jp, HalfInt Fp, HalfInt mFp,
                           const DressedEntry& entry, HalfInt J, HalfInt I) {
  if (mFp.twice() != entry.mJ.twice() + entry.mI.twice()) return 0.0;
  const HalfInt one(2);
  double a = wigner_3j(Jp, J, one, -entry.mJ, entry.mJ, HalfInt(0));
  double b = wigner_3j(Jp, Fp, I, -entry.mJ, mFp, entry.mJ - mFp);
  return std::pow(2.0, -std::abs(entry.s)) * a * a * b * b;
}

double dressed_strength_residual(const LadderSpec& ladder) {
  ladder.validate();
  const LevelSpec& li = ladder.i();
  const LevelSpec& r1 = ladder.r1();
  const HalfInt I = ladder.nuclear_spin;
  const HalfInt one(2);

  // For each pi-coupled pair (i sublevel) -> (uncoupled |J mJ, I mI> Rydberg
  // state), compare the explicit hyperfine expansion against the closed
  // two-3j form. Their squared ratio must be one global constant.
  std::vector<double> explicit_sq, closed_sq;
  for (HalfInt Fp : level_f_values(li, I)) {
    for (int tmf = -Fp.twice(); tmf <= Fp.twice(); tmf += 2) {
      HalfInt mFp(tmf);
      for (int tmj = -r1.J.twice(); tmj <= r1.J.twice(); tmj += 2) {
        HalfInt mJ(tmj);
        HalfInt mI = mFp - mJ;
        if (mI.abs() > I) continue;
        double sum = 0.0;
        for (HalfInt F : level_f_values(fine(r1), I)) {
          if (mFp.abs() > F) continue;
          sum += clebsch_gordan(r1.J, mJ, I, mI, F, mFp) *
                 angular_element(li, Fp, mFp, fine(r1), F, mFp, 0, I);
        }
        double a = wigner_3j(li.J, r1.J, one, -mJ, mJ, HalfInt(0));
        double b = wigner_3j(li.J, Fp, I, -mJ, mFp, mJ - mFp);
        explicit_sq.push_back(sum * sum);
        closed_sq.push_back(a * a * b * b);
      }
    }
  }

  double num = 0.0, den = 0.0, peak = 0.0;
  for (size_t k = 0; k < explicit_sq.size(); ++k) {
    num += explicit_sq[k] * closed_sq[k];
    den += closed_sq[k] * closed_sq[k];
    peak = std::max(peak, explicit_sq[k]);
  }
  if (den == 0.0 || peak == 0.0)
    throw std::domain_error("no pi-coupled dressed transitions in this ladder");
  const double c = num / den;
  double residual = 0.0;
  for (size_t k = 0; k < explicit_sq.size(); ++k)
    residual = std::max(residual,
                        std::abs(explicit_sq[k] - c * closed_sq[k]) / peak);
  return residual;
}

std::vector<double> diagonalize_mF_block(const LadderSpec& ladder, HalfInt mF,
                                         double rf_rabi) {
  ladder.validate();
  const LevelSpec& r1 = ladder.r1();
  const LevelSpec& r2 = ladder.r2();
  const HalfInt I = ladder.nuclear_spin;

  std::vector<HalfInt> f1, f2;
  for (HalfInt F : level_f_values(r1, I))
    if (mF.abs() <= F) f1.push_back(F);
  for (HalfInt F : level_f_values(r2, I))
    if (mF.abs() <= F) f2.push_back(F);
  const int n1 = static_cast<int>(f1.size());
  const int n = n1 + static_cast<int>(f2.size());
  if (n == 0) throw std::domain_error("no Rydberg state carries the requested mF");

  const double scale = 0.5 * rf_rabi / max_pi_element(r1, r2);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n1; ++a)
    for (size_t b = 0; b < f2.size(); ++b) {
      double v = scale * angular_element(r1, f1[a], mF, r2, f2[b], mF, 0, I);
      H(a, n1 + static_cast<int>(b)) = v;
      H(n1 + static_cast<int>(b), a) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

CentralFeature predict_central_peak(const LadderSpec& ladder, double theta) {
  ladder.validate();
  // Away from parallel polarization every mJ column is coupled, so an
  // undressed line cannot dominate but some population always remains near
  // zero shift.
  if (std::abs(std::sin(theta)) > 1e-9) return CentralFeature::present;
  const HalfInt J1 = ladder.r1().J, J2 = ladder.r2().J, Ji = ladder.i().J;
  const bool spectators = J1 > J2;       // |mJ| = J1 columns have no partner
  const bool accessible = J1 <= Ji;      // pi-coupled from the i level
  return (spectators && accessible) ? CentralFeature::dominant : CentralFeature::absent;
}

}  // namespace rydpol
