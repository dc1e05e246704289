#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace coarsetop {

using Integer = boost::multiprecision::cpp_int;

// The field with two elements.
class Gf2 {
 public:
  constexpr Gf2() = default;
  constexpr Gf2(long long v) : bit_((v & 1) != 0) {}  // NOLINT: implicit by design

  constexpr bool bit() const { return bit_; }

  friend constexpr Gf2 operator+(Gf2 a, Gf2 b) { return from_bit(a.bit_ != b.bit_); }
  friend constexpr Gf2 operator-(Gf2 a, Gf2 b) { return a + b; }
  friend constexpr Gf2 operator-(Gf2 a) { return a; }
  friend constexpr Gf2 operator*(Gf2 a, Gf2 b) { return from_bit(a.bit_ && b.bit_); }
  constexpr Gf2& operator+=(Gf2 o) { return *this = *this + o; }
  constexpr Gf2& operator-=(Gf2 o) { return *this = *this - o; }
  constexpr Gf2& operator*=(Gf2 o) { return *this = *this * o; }
  friend constexpr bool operator==(Gf2 a, Gf2 b) { return a.bit_ == b.bit_; }

  friend std::ostream& operator<<(std::ostream& os, Gf2 a) { return os << (a.bit_ ? 1 : 0); }

 private:
  static constexpr Gf2 from_bit(bool b) {
    Gf2 r;
    r.bit_ = b;
    return r;
  }
  bool bit_ = false;
};

template <class R>
struct RingTraits;

template <>
struct RingTraits<Integer> {
  static constexpr std::string_view name = "Z";
  static std::string to_string(const Integer& v) { return v.str(); }
  static long long to_ll(const Integer& v) { return v.convert_to<long long>(); }
};

template <>
struct RingTraits<Gf2> {
  static constexpr std::string_view name = "GF2";
  static std::string to_string(Gf2 v) { return v.bit() ? "1" : "0"; }
  static long long to_ll(Gf2 v) { return v.bit() ? 1 : 0; }
};

template <class R>
inline bool is_zero(const R& v) {
  return v == R(0);
}

inline Gf2 reduce_mod2(const Integer& v) { return Gf2(v % 2 != 0 ? 1 : 0); }

// ε_n = (−1)^n. Defined for negative n as well.
constexpr int eps(long long n) { return (n % 2 == 0) ? 1 : -1; }

// ε′_n = (−1)^{n(n+1)/2}. ε′_{−1} = +1.
constexpr int eps_prime(long long n) { return ((n * (n + 1) / 2) % 2 == 0) ? 1 : -1; }

}  // namespace coarsetop
