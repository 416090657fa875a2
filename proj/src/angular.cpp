#include "rydpol/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace rydpol {
namespace {

// Factorials as prime-power exponent vectors, so square-root prefactors of
// the Racah formulas are assembled without overflow or cancellation.
class PrimeFactorials {
 public:
  static const PrimeFactorials& instance() {
    static PrimeFactorials pf;
    return pf;
  }

  // Adds exps(n!) * weight into acc.
  void accumulate(std::vector<int>& acc, int n, int weight) const {
    const auto& e = exponents(n);
    if (acc.size() < e.size()) acc.resize(e.size(), 0);
    for (size_t k = 0; k < e.size(); ++k) acc[k] += weight * e[k];
  }

  // Value of prod_p p^(exps[p]/2), exponents may be odd or negative.
  double sqrt_value(const std::vector<int>& exps) const {
    double v = 1.0;
    for (size_t k = 0; k < exps.size(); ++k) {
      if (exps[k] != 0) v *= std::pow(static_cast<double>(primes_[k]), 0.5 * exps[k]);
    }
    return v;
  }

 private:
  PrimeFactorials() {
    // Primes up to 400 cover factorial arguments for j well beyond this
    // project's needs (j <= ~100).
    for (int n = 2; n < 400; ++n) {
      bool prime = true;
      for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) { prime = false; break; }
      if (prime) primes_.push_back(n);
    }
  }

  const std::vector<int>& exponents(int n) const {
    std::lock_guard lock(mu_);
    while (static_cast<int>(cache_.size()) <= n) {
      int m = static_cast<int>(cache_.size());
      std::vector<int> e;
      if (m == 0) {
        e.assign(primes_.size(), 0);
      } else {
        e = cache_.back();
        int rem = m;
        for (size_t k = 0; k < primes_.size() && rem > 1; ++k) {
          while (rem % primes_[k] == 0) { ++e[k]; rem /= primes_[k]; }
        }
      }
      cache_.push_back(std::move(e));
    }
    return cache_[n];
  }

  std::vector<int> primes_;
  mutable std::mutex mu_;
  mutable std::vector<std::vector<int>> cache_;
};

// Double-precision factorial table for the alternating Racah sums.
double dfact(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (int k = 1; k <= 170; ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  return table[n];
}

void require_valid_j(HalfInt j) {
  if (j.twice() < 0) throw std::domain_error("negative angular momentum magnitude");
}

// |m| > j is a selection rule (the symbol vanishes), not invalid input; only
// a non-integer j - m is rejected.
bool require_valid_jm(HalfInt j, HalfInt m) {
  require_valid_j(j);
  if ((j.twice() - m.twice()) % 2 != 0)
    throw std::domain_error("j - m is not an integer");
  return m.abs() <= j;
}

// Accumulates the triangle coefficient Delta(a,b,c) exponents:
// (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!
void accumulate_delta(std::vector<int>& acc, HalfInt a, HalfInt b, HalfInt c) {
  const auto& pf = PrimeFactorials::instance();
  pf.accumulate(acc, (a + b - c).twice() / 2, 1);
  pf.accumulate(acc, (a - b + c).twice() / 2, 1);
  pf.accumulate(acc, ((-a) + b + c).twice() / 2, 1);
  pf.accumulate(acc, (a + b + c).twice() / 2 + 1, -1);
}

double wigner_3j_impl(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt m1, HalfInt m2, HalfInt m3) {
  if ((m1 + m2 + m3).twice() != 0) return 0.0;
  if (!triangle_ok(j1, j2, j3)) return 0.0;

  const auto& pf = PrimeFactorials::instance();
  std::vector<int> exps;
  accumulate_delta(exps, j1, j2, j3);
  pf.accumulate(exps, (j1 + m1).twice() / 2, 1);
  pf.accumulate(exps, (j1 - m1).twice() / 2, 1);
  pf.accumulate(exps, (j2 + m2).twice() / 2, 1);
  pf.accumulate(exps, (j2 - m2).twice() / 2, 1);
  pf.accumulate(exps, (j3 + m3).twice() / 2, 1);
  pf.accumulate(exps, (j3 - m3).twice() / 2, 1);
  const double prefactor = pf.sqrt_value(exps);

  // Racah sum over t; all factorial arguments are integers by construction.
  const int a1 = (j1 + j2 - j3).twice() / 2;   // j1+j2-j3 - t
  const int a2 = (j1 - m1).twice() / 2;        // j1-m1 - t
  const int a3 = (j2 + m2).twice() / 2;        // j2+m2 - t
  const int b1 = (j3 - j2 + m1).twice() / 2;   // t + j3-j2+m1
  const int b2 = (j3 - j1 - m2).twice() / 2;   // t + j3-j1-m2
  const int tmin = std::max({0, -b1, -b2});
  const int tmax = std::min({a1, a2, a3});

  double sum = 0.0;
  for (int t = tmin; t <= tmax; ++t) {
    double term = 1.0 / (dfact(t) * dfact(a1 - t) * dfact(a2 - t) * dfact(a3 - t) *
                         dfact(b1 + t) * dfact(b2 + t));
    sum += (t % 2 == 0) ? term : -term;
  }

  const int phase_exp = (j1 - j2 - m3).twice() / 2;
  const double sign = (phase_exp % 2 == 0) ? 1.0 : -1.0;
  return sign * prefactor * sum;
}

double wigner_6j_impl(HalfInt j1, HalfInt j2, HalfInt j3,
                      HalfInt j4, HalfInt j5, HalfInt j6) {
  if (!triangle_ok(j1, j2, j3) || !triangle_ok(j1, j5, j6) ||
      !triangle_ok(j4, j2, j6) || !triangle_ok(j4, j5, j3))
    return 0.0;

  const auto& pf = PrimeFactorials::instance();
  std::vector<int> exps;
  accumulate_delta(exps, j1, j2, j3);
  accumulate_delta(exps, j1, j5, j6);
  accumulate_delta(exps, j4, j2, j6);
  accumulate_delta(exps, j4, j5, j3);
  const double prefactor = pf.sqrt_value(exps);

  const int s1 = (j1 + j2 + j3).twice() / 2;
  const int s2 = (j1 + j5 + j6).twice() / 2;
  const int s3 = (j4 + j2 + j6).twice() / 2;
  const int s4 = (j4 + j5 + j3).twice() / 2;
  const int q1 = (j1 + j2 + j4 + j5).twice() / 2;
  const int q2 = (j2 + j3 + j5 + j6).twice() / 2;
  const int q3 = (j3 + j1 + j6 + j4).twice() / 2;
  const int tmin = std::max({s1, s2, s3, s4});
  const int tmax = std::min({q1, q2, q3});

  double sum = 0.0;
  for (int t = tmin; t <= tmax; ++t) {
    double term = dfact(t + 1) /
                  (dfact(t - s1) * dfact(t - s2) * dfact(t - s3) * dfact(t - s4) *
                   dfact(q1 - t) * dfact(q2 - t) * dfact(q3 - t));
    sum += (t % 2 == 0) ? term : -term;
  }
  return prefactor * sum;
}

// Memo for computed symbols; the sweep engine re-requests a small set of
// symbols millions of times. Safe for concurrent readers and writers.
struct SymbolKey {
  std::array<int, 7> v;
  bool operator==(const SymbolKey&) const = default;
};

struct SymbolKeyHash {
  size_t operator()(const SymbolKey& k) const noexcept {
    size_t h = 1469598103934665603ull;
    for (int x : k.v) {
      h ^= static_cast<size_t>(static_cast<unsigned>(x));
      h *= 1099511628211ull;
    }
    return h;
  }
};

class SymbolCache {
 public:
  template <typename F>
  double get_or_compute(const SymbolKey& key, F&& compute) {
    {
      std::shared_lock lock(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    double value = compute();
    std::unique_lock lock(mu_);
    map_.emplace(key, value);
    return value;
  }

  void clear() {
    std::unique_lock lock(mu_);
    map_.clear();
  }

 private:
  std::shared_mutex mu_;
  std::unordered_map<SymbolKey, double, SymbolKeyHash> map_;
};

SymbolCache& cache() {
  static SymbolCache c;
  return c;
}

double g_6j_perturbation = 1.0;

}  // namespace

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3,
                 HalfInt m1, HalfInt m2, HalfInt m3) {
  if (!require_valid_jm(j1, m1) || !require_valid_jm(j2, m2) || !require_valid_jm(j3, m3))
    return 0.0;
  SymbolKey key{{3, j1.twice(), j2.twice(), j3.twice(), m1.twice(), m2.twice(), m3.twice()}};
  return cache().get_or_compute(key, [&] { return wigner_3j_impl(j1, j2, j3, m1, m2, m3); });
}

double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3,
                 HalfInt j4, HalfInt j5, HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6}) require_valid_j(j);
  SymbolKey key{{6, j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()}};
  return g_6j_perturbation *
         cache().get_or_compute(key, [&] { return wigner_6j_impl(j1, j2, j3, j4, j5, j6); });
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt J, HalfInt M) {
  if (!require_valid_jm(j1, m1) || !require_valid_jm(j2, m2) || !require_valid_jm(J, M))
    return 0.0;
  if ((m1 + m2).twice() != M.twice()) return 0.0;
  if (!triangle_ok(j1, j2, J)) return 0.0;
  const int phase_exp = (j1 - j2 + M).twice() / 2;
  const double sign = (phase_exp % 2 == 0) ? 1.0 : -1.0;
  return sign * std::sqrt(J.twice() + 1.0) * wigner_3j(j1, j2, J, m1, m2, -M);
}

namespace detail {
void perturb_6j_for_test(double factor) {
  g_6j_perturbation = factor;
}
}  // namespace detail

}  // namespace rydpol
