#pragma once

// Computable reals as digit streams.
//
//   u_real: binary digits {0, 1}, denoting sum d_i 2^-(i+1) in [0, 1].
//   i_real: signed digits {-1, 0, 1}, same weights, denoting a value in [-1, 1].
//
// Arithmetic lives on i_real (midpoint, negation, multiplication); u_real
// carries the precision-indexed orders used for loss values.

#include <atomic>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "searchreal/errors.hpp"
#include "searchreal/lazy_sequence.hpp"
#include "searchreal/stype.hpp"

namespace searchreal {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;
using digit = std::int8_t;

namespace detail {

template <class Tag>
class digit_stream {
 public:
  digit_stream() : digits_(constant_sequence<digit>(0)) {}
  explicit digit_stream(lazy_sequence<digit> digits) : digits_(std::move(digits)) {}
  explicit digit_stream(typename lazy_sequence<digit>::producer next)
      : digits_(std::move(next)) {}

  digit operator[](std::size_t i) const { return digits_[i]; }
  const lazy_sequence<digit>& digits() const noexcept { return digits_; }

  std::vector<digit> prefix(std::size_t n) const {
    std::vector<digit> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = digits_[i];
    return out;
  }

 private:
  lazy_sequence<digit> digits_;
};

struct unit_tag {};
struct signed_tag {};

}  // namespace detail

/// A real in [0, 1] as a stream of binary digits.
using u_real = detail::digit_stream<detail::unit_tag>;
/// A real in [-1, 1] as a stream of signed binary digits.
using i_real = detail::digit_stream<detail::signed_tag>;

// ---------------------------------------------------------------------------
// construction

template <class Real>
Real constant_digits(digit d) {
  return Real(constant_sequence<digit>(d));
}

// prefix ++ 0 0 0 ...
template <class Real>
Real from_prefix(std::vector<digit> prefix) {
  auto shared = std::make_shared<const std::vector<digit>>(std::move(prefix));
  return Real([shared](std::size_t i) -> digit { return i < shared->size() ? (*shared)[i] : 0; });
}

inline u_real u_zero() { return constant_digits<u_real>(0); }
inline i_real i_zero() { return constant_digits<i_real>(0); }
inline i_real i_one() { return constant_digits<i_real>(1); }

namespace detail {

// Greedy binary expansion of num/den in [0, 1]; dyadics get the terminating
// form, and 1 is 0.111...
inline lazy_sequence<digit> greedy_binary(big_int num, big_int den) {
  struct state {
    big_int num, den;
  };
  auto s = std::make_shared<state>(state{std::move(num), std::move(den)});
  return lazy_sequence<digit>([s](std::size_t) -> digit {
    s->num *= 2;
    if (s->num >= s->den) {
      // 1 = 0.111...: keep emitting ones without letting the remainder grow.
      s->num -= s->den;
      if (s->num > s->den) s->num = s->den;
      return 1;
    }
    return 0;
  });
}

inline void check_den(const big_int& den) {
  if (den <= 0) throw domain_error("denominator must be positive");
}

}  // namespace detail

/// Binary expansion of num/den, which must lie in [0, 1].
inline u_real u_from_rational(const big_int& num, const big_int& den) {
  detail::check_den(den);
  if (num < 0 || num > den) throw domain_error("u_from_rational: value outside [0, 1]");
  return u_real(detail::greedy_binary(num, den));
}

/// Canonical signed-digit expansion of num/den in [-1, 1]: digits {0, 1} for
/// nonnegative inputs and {0, -1} for negative ones.
inline i_real i_from_rational(const big_int& num, const big_int& den) {
  detail::check_den(den);
  if (num > den || num < -den) throw domain_error("i_from_rational: value outside [-1, 1]");
  if (num >= 0) return i_real(detail::greedy_binary(num, den));
  return i_real(map_sequence(detail::greedy_binary(-num, den),
                             [](digit d) { return static_cast<digit>(-d); }));
}

inline i_real i_from_rational(const rational& r) {
  return i_from_rational(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

inline u_real u_from_rational(const rational& r) {
  return u_from_rational(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

// ---------------------------------------------------------------------------
// evaluation and rendering

/// sum_{i<n} d_i 2^-(i+1). The denoted value lies within 2^-n of the result.
template <class Real>
rational eval_prefix(const Real& x, std::size_t n) {
  big_int acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc = 2 * acc + x[i];
  return rational(acc, big_int(1) << n);
}

/// Exact decimal rendering of a dyadic rational (denominator a power of two).
inline std::string to_decimal(const rational& r) {
  big_int num = boost::multiprecision::numerator(r);
  big_int den = boost::multiprecision::denominator(r);
  std::size_t shift = 0;
  while (den > 1) {
    if (den % 2 != 0) throw domain_error("to_decimal: not a dyadic rational");
    den /= 2;
    ++shift;
  }
  bool negative = num < 0;
  if (negative) num = -num;
  // num / 2^shift == num * 5^shift / 10^shift
  big_int scaled = num * boost::multiprecision::pow(big_int(5), static_cast<unsigned>(shift));
  std::string digits = scaled.str();
  if (digits.size() <= shift) digits.insert(0, shift - digits.size() + 1, '0');
  std::string out = digits.substr(0, digits.size() - shift);
  if (shift > 0) {
    std::string frac = digits.substr(digits.size() - shift);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
  }
  if (negative && scaled != 0) out.insert(0, "-");
  return out;
}

inline std::string rational_string(const rational& r) {
  big_int den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

// ---------------------------------------------------------------------------
// orders on u_real

/// a <_p b: some k < p where the prefixes agree before k and a_k < b_k.
inline bool u_lt(const u_real& a, const u_real& b, std::size_t p) {
  for (std::size_t k = 0; k < p; ++k) {
    digit x = a[k], y = b[k];
    if (x != y) return x < y;
  }
  return false;
}

// a <=_p b: a <_p b or a ==_p b.
inline bool u_leq(const u_real& a, const u_real& b, std::size_t p) {
  for (std::size_t k = 0; k < p; ++k) {
    digit x = a[k], y = b[k];
    if (x != y) return x < y;
  }
  return true;
}

inline bool digits_equal(const lazy_sequence<digit>& a, const lazy_sequence<digit>& b,
                         std::size_t p) {
  for (std::size_t k = 0; k < p; ++k) {
    if (a[k] != b[k]) return false;
  }
  return true;
}

template <class Real>
bool eq_prefix(const Real& a, const Real& b, std::size_t p) {
  return digits_equal(a.digits(), b.digits(), p);
}

// ---------------------------------------------------------------------------
// midpoint

namespace detail {

inline std::atomic<std::uint64_t>& carry_violations() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

// Digit selection and carry update of the midpoint automaton.
constexpr digit ceil_digit(int m) { return m <= -2 ? -1 : (m <= 1 ? 0 : 1); }
constexpr int floor_carry(int m) { return m <= -2 ? m + 4 : (m <= 1 ? m : m - 4); }

}  // namespace detail

// Carry values outside [-2, 2] observed by any midpoint stream so far.
inline std::uint64_t midpoint_carry_violations() { return detail::carry_violations().load(); }

/// (x + y) / 2. With x = x0::x' and y = y0::y', the result is the carry
/// automaton started on (x', y') with carry x0 + y0: each step reads the next
/// digit pair, emits ceil_digit(2i + x + y) and moves to floor_carry(2i + x + y).
inline i_real midpoint(const i_real& x, const i_real& y) {
  struct state {
    i_real x, y;
    int carry = 0;
  };
  auto s = std::make_shared<state>(state{x, y, 0});
  return i_real([s](std::size_t n) -> digit {
    if (n == 0) s->carry = s->x[0] + s->y[0];
    int m = 2 * s->carry + s->x[n + 1] + s->y[n + 1];
    s->carry = detail::floor_carry(m);
    if (s->carry < -2 || s->carry > 2) {
      detail::carry_violations().fetch_add(1);
      assert(false && "midpoint carry left [-2, 2]");
    }
    return detail::ceil_digit(m);
  });
}

inline i_real negate(const i_real& x) {
  return i_real(map_sequence(x.digits(), [](digit d) { return static_cast<digit>(-d); }));
}

// 0 :: x, i.e. x / 2.
inline i_real halve(const i_real& x) { return i_real(cons<digit>(0, x.digits())); }

/// (u + v + w) / 4 as (u (+) v) (+) (w (+) 0); the factor 4 is the caller's
/// bookkeeping.
inline i_real add3_scaled(const i_real& u, const i_real& v, const i_real& w) {
  return midpoint(midpoint(u, v), midpoint(w, i_zero()));
}

/// Maps -1 digits to 0 and keeps the rest. This works on codes, not values:
/// the result is never below the denoted value of the input and vanishes on
/// the zero stream.
inline u_real truncate(const i_real& x) {
  return u_real(map_sequence(x.digits(), [](digit d) { return d < 0 ? digit{0} : d; }));
}

// ---------------------------------------------------------------------------
// multiplication

namespace detail {

// d (x) s: every digit of s multiplied by the digit d, where d is read
// lazily from position `at` of `source`.
inline i_real scale_by_digit(const i_real& source, std::size_t at, const i_real& s) {
  return i_real([source, at, s](std::size_t i) -> digit {
    return static_cast<digit>(source[at] * s[i]);
  });
}

inline i_real tail2(const i_real& x) { return i_real(drop(x.digits(), 2)); }

// Write x = a::b::X and y = c::d::Y, so that
//   2xy = ac/2 + bc/4 + bd/8 + XY/8            (the q part)
//       + ad/4 + (aY + cX)/4 + (bY + dX)/8     (the p part).

// p'(x, y) = ad :: ((b (x) Y) (+) (d (x) X)), value ad/2 + (bY + dX)/4.
inline i_real p_prime(const i_real& x, const i_real& y) {
  i_real X = tail2(x), Y = tail2(y);
  i_real rest = midpoint(scale_by_digit(x, 1, Y), scale_by_digit(y, 1, X));
  return i_real([x, y, rest](std::size_t n) -> digit {
    return n == 0 ? static_cast<digit>(x[0] * y[1]) : rest[n - 1];
  });
}

// p''(x, y) = (c (x) X) (+) (a (x) Y), value (aY + cX)/2.
inline i_real p_second(const i_real& x, const i_real& y) {
  return midpoint(scale_by_digit(y, 0, tail2(x)), scale_by_digit(x, 0, tail2(y)));
}

inline i_real p(const i_real& x, const i_real& y) { return midpoint(p_prime(x, y), p_second(x, y)); }

}  // namespace detail

inline i_real multiply(const i_real& x, const i_real& y);

namespace detail {

// q(x, y) = ac :: bc :: bd :: (X * Y), value ac/2 + bc/4 + bd/8 + XY/8. The
// product of the tails is created on first demand.
inline i_real q(const i_real& x, const i_real& y) {
  struct state {
    i_real x, y;
    std::optional<i_real> rest;
  };
  auto s = std::make_shared<state>(state{x, y, std::nullopt});
  return i_real([s](std::size_t n) -> digit {
    switch (n) {
      case 0:
        return static_cast<digit>(s->x[0] * s->y[0]);
      case 1:
        return static_cast<digit>(s->x[1] * s->y[0]);
      case 2:
        return static_cast<digit>(s->x[1] * s->y[1]);
      default:
        if (!s->rest) s->rest = multiply(tail2(s->x), tail2(s->y));
        return (*s->rest)[n - 3];
    }
  });
}

// The fuel-indexed form q(k, x, y): identical to q(x, y) except that at fuel 0
// every digit past index 2 is 0.
inline i_real q_fueled(std::size_t k, const i_real& x, const i_real& y) {
  struct state {
    std::size_t k;
    i_real x, y;
    std::optional<i_real> rest;
  };
  auto s = std::make_shared<state>(state{k, x, y, std::nullopt});
  return i_real([s](std::size_t n) -> digit {
    switch (n) {
      case 0:
        return static_cast<digit>(s->x[0] * s->y[0]);
      case 1:
        return static_cast<digit>(s->x[1] * s->y[0]);
      case 2:
        return static_cast<digit>(s->x[1] * s->y[1]);
      default:
        if (s->k == 0) return 0;
        if (!s->rest) {
          i_real X = tail2(s->x), Y = tail2(s->y);
          s->rest = midpoint(p(X, Y), q_fueled(s->k - 1, X, Y));
        }
        return (*s->rest)[n - 3];
    }
  });
}

// (x * y)_n = (p(x, y) (+) q(n, x, y))_n, one fresh q stream per digit.
// Quadratic; kept as the literal reference for the memoised product.
inline i_real multiply_fueled(const i_real& x, const i_real& y) {
  i_real px = p(x, y);
  return i_real([x, y, px](std::size_t n) -> digit {
    return midpoint(px, q_fueled(n, x, y))[n];
  });
}

}  // namespace detail

/// x * y as p(x, y) (+) q(x, y). Every digit of q past index 2 is a digit of
/// the product of the two-digit tails, so the product is exact and each
/// output digit n reads input digits 0..n+4.
inline i_real multiply(const i_real& x, const i_real& y) {
  return midpoint(detail::p(x, y), detail::q(x, y));
}

// ---------------------------------------------------------------------------
// moduli of continuity (output digits -> input digits)

constexpr std::size_t identity_modulus(std::size_t n) { return n; }
constexpr std::size_t midpoint_modulus(std::size_t n) { return n == 0 ? 0 : n + 1; }
constexpr std::size_t multiply_modulus(std::size_t n) { return n == 0 ? 0 : n + 5; }
constexpr std::size_t halve_modulus(std::size_t n) { return n == 0 ? 0 : n - 1; }

// ---------------------------------------------------------------------------
// embeddings into searchable types

// I = Seq(Fin(3)) with index 0 -> 0, 1 -> 1, 2 -> -1, so the default
// sequence is the real 0. U = Seq(Fin(2)) with index = bit.
inline descriptor i_descriptor() { return descriptor::sequence(descriptor::finite(3)); }
inline descriptor u_descriptor() { return descriptor::sequence(descriptor::finite(2)); }

constexpr digit index_to_digit(std::size_t index) {
  return index == 0 ? digit{0} : (index == 1 ? digit{1} : digit{-1});
}
constexpr std::size_t digit_to_index(digit d) { return d == 0 ? 0 : (d == 1 ? 1 : 2); }

inline value to_value(const i_real& x) {
  return value::seq(map_sequence(x.digits(), [](digit d) { return value::fin(digit_to_index(d), 3); }));
}

inline value to_value(const u_real& x) {
  return value::seq(
      map_sequence(x.digits(), [](digit d) { return value::fin(static_cast<std::size_t>(d), 2); }));
}

inline i_real i_from_value(const value& v) {
  return i_real(map_sequence(v.elements(), [](const value& e) {
    if (e.tag() != value::kind::finite || e.cardinality() != 3) {
      throw structural_error("value is not an element of Seq(Fin(3))");
    }
    return index_to_digit(e.index());
  }));
}

inline u_real u_from_value(const value& v) {
  return u_real(map_sequence(v.elements(), [](const value& e) {
    if (e.tag() != value::kind::finite || e.cardinality() != 2) {
      throw structural_error("value is not an element of Seq(Fin(2))");
    }
    return static_cast<digit>(e.index());
  }));
}

// ---------------------------------------------------------------------------
// comparison of i_real values through the unit interval

/// The u_real whose digits are the binary expansion of (v + 1) / 2, where v is
/// the prefix-p value of x. Depends on the first p digits of x only.
inline u_real unit_embedding(const i_real& x, std::size_t p) {
  big_int acc = 0;
  for (std::size_t i = 0; i < p; ++i) acc = 2 * acc + x[i];
  big_int scale = big_int(1) << p;
  return u_from_rational(acc + scale, 2 * scale);
}

// x <_p y and x <=_p y, decided on the unit embeddings at precision p.
inline bool i_lt(const i_real& x, const i_real& y, std::size_t p) {
  return u_lt(unit_embedding(x, p), unit_embedding(y, p), p);
}

inline bool i_leq(const i_real& x, const i_real& y, std::size_t p) {
  return u_leq(unit_embedding(x, p), unit_embedding(y, p), p);
}

}  // namespace searchreal
