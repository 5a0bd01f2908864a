#pragma once

// Reference implementations for testing: exact rationals, exhaustive search
// over prefix spaces, and bisection. Nothing here uses the digit-stream
// arithmetic or the searcher.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "searchreal/errors.hpp"
#include "searchreal/stype.hpp"

namespace searchreal::oracle {

using integer = boost::multiprecision::cpp_int;

/// Normalised exact rational.
class rational {
 public:
  rational() = default;
  rational(long long n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  rational(integer n, integer d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw domain_error("zero denominator");
    normalise();
  }

  const integer& num() const { return num_; }
  const integer& den() const { return den_; }

  friend rational operator+(const rational& a, const rational& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend rational operator-(const rational& a) { return {-a.num_, a.den_}; }
  friend rational operator-(const rational& a, const rational& b) { return a + (-b); }
  friend rational operator*(const rational& a, const rational& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }
  friend int compare(const rational& a, const rational& b) {
    integer l = a.num_ * b.den_, r = b.num_ * a.den_;
    return l < r ? -1 : (l > r ? 1 : 0);
  }
  friend bool operator==(const rational& a, const rational& b) { return compare(a, b) == 0; }
  friend bool operator<(const rational& a, const rational& b) { return compare(a, b) < 0; }
  friend bool operator<=(const rational& a, const rational& b) { return compare(a, b) <= 0; }
  friend bool operator>(const rational& a, const rational& b) { return compare(a, b) > 0; }
  friend bool operator>=(const rational& a, const rational& b) { return compare(a, b) >= 0; }

  std::string str() const { return den_ == 1 ? num_.str() : num_.str() + "/" + den_.str(); }

 private:
  integer num_ = 0;
  integer den_ = 1;

  void normalise() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    integer g = boost::multiprecision::gcd(num_ < 0 ? integer(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
};

inline rational add(const rational& a, const rational& b) { return a + b; }
inline rational mul(const rational& a, const rational& b) { return a * b; }
inline rational neg(const rational& a) { return -a; }
inline rational mid(const rational& a, const rational& b) { return (a + b) * rational(1, 2); }
inline rational abs(const rational& a) { return a < 0 ? -a : a; }

inline rational pow2(long long e) {
  return e >= 0 ? rational(integer(1) << e, 1) : rational(1, integer(1) << -e);
}

/// Sum of d_i 2^-(i+1) over a finite digit list.
inline rational digits_value(const std::vector<int>& ds) {
  rational acc = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) acc = acc + rational(ds[i], integer(1) << (i + 1));
  return acc;
}

// ---------------------------------------------------------------------------
// exhaustive search over prefix spaces

/// All values distinguishable at p in lexicographic order (earlier sequence
/// positions and left components vary slowest), each completed with the
/// default tail. Throws budget_exceeded past `budget` candidates.
inline std::vector<value> enumerate(const descriptor& d, const precision& p, std::uint64_t budget) {
  std::vector<value> out;
  switch (d.tag()) {
    case descriptor::kind::finite:
      for (std::size_t i = 0; i < d.cardinality(); ++i) out.push_back(value::fin(i, d.cardinality()));
      break;
    case descriptor::kind::product: {
      auto ls = enumerate(d.left(), p.first(), budget);
      auto rs = enumerate(d.right(), p.second(), budget);
      if (ls.size() * rs.size() > budget) throw budget_exceeded("enumeration too large", ls.size() * rs.size(), budget);
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back(value::pair(l, r));
      break;
    }
    case descriptor::kind::sequence: {
      auto elems = enumerate(d.element(), p.element(), budget);
      std::vector<std::vector<value>> prefixes{{}};
      for (std::size_t i = 0; i < p.length(); ++i) {
        if (prefixes.size() * elems.size() > budget)
          throw budget_exceeded("enumeration too large", prefixes.size() * elems.size(), budget);
        std::vector<std::vector<value>> next;
        for (const auto& pre : prefixes) {
          for (const auto& e : elems) {
            next.push_back(pre);
            next.back().push_back(e);
          }
        }
        prefixes = std::move(next);
      }
      value tail = default_value(d);
      for (auto& pre : prefixes) out.push_back(value::from_prefix(std::move(pre), tail));
      break;
    }
  }
  if (out.size() > budget) throw budget_exceeded("enumeration too large", out.size(), budget);
  return out;
}

/// First candidate at precision p satisfying P, if any.
inline std::optional<value> brute_force_search(const descriptor& d, const precision& p,
                                               const std::function<bool(const value&)>& P,
                                               std::uint64_t budget = 10'000'000) {
  for (const value& v : enumerate(d, p, budget)) {
    if (P(v)) return v;
  }
  return std::nullopt;
}

/// Smallest score over all candidates at precision p.
inline rational brute_force_min(const descriptor& d, const precision& p,
                                const std::function<rational(const value&)>& score,
                                std::uint64_t budget = 10'000'000) {
  std::optional<rational> best;
  for (const value& v : enumerate(d, p, budget)) {
    rational s = score(v);
    if (!best || s < *best) best = s;
  }
  return *best;
}

// ---------------------------------------------------------------------------
// roots

/// A root of f in [lo, hi] within tol, given f(lo) and f(hi) of opposite
/// signs (or one of them zero).
inline rational bisect_root(const std::function<rational(const rational&)>& f, rational lo, rational hi,
                            const rational& tol) {
  rational flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0)) throw domain_error("bisect_root: no sign change on the interval");
  while (hi - lo > tol) {
    rational m = mid(lo, hi);
    rational fm = f(m);
    if (fm == 0) return m;
    if ((fm < 0) == (flo < 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return mid(lo, hi);
}

}  // namespace searchreal::oracle
