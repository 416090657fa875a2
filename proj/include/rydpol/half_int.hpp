#pragma once

#include <compare>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>

namespace rydpol {

/// Angular momentum stored as twice its value, so half-integers are exact.
/// Magnitudes (j, F, I) are non-negative; projections may be negative.
class HalfInt {
 public:
  constexpr HalfInt() : twice_(0) {}
  constexpr explicit HalfInt(int twice_value) : twice_(twice_value) {}

  static constexpr HalfInt from_int(int v) { return HalfInt(2 * v); }
  static constexpr HalfInt half(int numerator) { return HalfInt(numerator); }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * twice_; }

  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  constexpr HalfInt abs() const { return HalfInt(twice_ < 0 ? -twice_ : twice_); }

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  int twice_;
};

inline constexpr HalfInt operator""_hi(unsigned long long v) {
  return HalfInt(static_cast<int>(2 * v));
}

/// True when (j, m) form a valid magnitude/projection pair: |m| <= j and
/// j - m is an integer.
inline constexpr bool valid_jm(HalfInt j, HalfInt m) {
  if (j.twice() < 0) return false;
  if (m.abs() > j) return false;
  return (j.twice() - m.twice()) % 2 == 0;
}

/// Triangle rule |a-b| <= c <= a+b with integer perimeter.
inline constexpr bool triangle_ok(HalfInt a, HalfInt b, HalfInt c) {
  if (a.twice() < 0 || b.twice() < 0 || c.twice() < 0) return false;
  if ((a.twice() + b.twice() + c.twice()) % 2 != 0) return false;
  return c >= (a - b).abs() && c <= a + b;
}

}  // namespace rydpol

template <>
struct std::hash<rydpol::HalfInt> {
  size_t operator()(rydpol::HalfInt h) const noexcept {
    return std::hash<int>()(h.twice());
  }
};
