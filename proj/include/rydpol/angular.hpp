#pragma once

#include "rydpol/half_int.hpp"

namespace rydpol {

// Wigner 3j symbol. Returns 0 when a selection rule (m1+m2+m3 != 0, triangle)
// fails; throws std::domain_error for malformed quantum numbers such as
// j - m not an integer.
double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3,
                 HalfInt m1, HalfInt m2, HalfInt m3);

// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}. Zero when any of the four triads
// violates the triangle rule.
double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3,
                 HalfInt j4, HalfInt j5, HalfInt j6);

// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M>.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt J, HalfInt M);

namespace detail {
// Test hook: scales every subsequently computed 6j by the given factor and
// clears the memo cache. Used by the verification runner's mutation check.
void perturb_6j_for_test(double factor);
}  // namespace detail

}  // namespace rydpol
