#pragma once

// Shared generators and checks for the test suites.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "searchreal/oracle.hpp"
#include "searchreal/reals.hpp"
#include "searchreal/searcher.hpp"
#include "searchreal/stype.hpp"

namespace support {

using namespace searchreal;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng());
}

inline long long uniform_signed(long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng());
}

/// Rational in [-1, 1] with denominator at most 2^max_log_den (any integer
/// denominator, not only powers of two).
inline rational random_rational(unsigned max_log_den = 10) {
  long long den = static_cast<long long>(uniform(1, 1ull << max_log_den));
  long long num = uniform_signed(-den, den);
  return rational(num, den);
}

inline oracle::rational to_oracle(const rational& r) {
  return oracle::rational(oracle::integer(boost::multiprecision::numerator(r).str()),
                          oracle::integer(boost::multiprecision::denominator(r).str()));
}

inline oracle::rational oracle_prefix(const i_real& x, std::size_t n) {
  std::vector<int> ds;
  for (std::size_t i = 0; i < n; ++i) ds.push_back(x[i]);
  return oracle::digits_value(ds);
}

inline oracle::rational oracle_prefix(const u_real& x, std::size_t n) {
  std::vector<int> ds;
  for (std::size_t i = 0; i < n; ++i) ds.push_back(x[i]);
  return oracle::digits_value(ds);
}

inline std::vector<digit> random_digits(std::size_t n, bool signed_digits = true) {
  std::vector<digit> out(n);
  for (auto& d : out) d = static_cast<digit>(signed_digits ? uniform_signed(-1, 1) : uniform_signed(0, 1));
  return out;
}

/// A stream with the given prefix followed by random digits.
inline i_real random_i_real_with_prefix(std::vector<digit> prefix, std::size_t total = 64) {
  auto rest = random_digits(total > prefix.size() ? total - prefix.size() : 0);
  prefix.insert(prefix.end(), rest.begin(), rest.end());
  return from_prefix<i_real>(prefix);
}

inline i_real random_i_real(std::size_t total = 64) { return random_i_real_with_prefix({}, total); }

/// Random value of d; sequences get `depth` random elements then the default.
inline value random_value(const descriptor& d, std::size_t depth = 12) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return value::fin(uniform(0, d.cardinality() - 1), d.cardinality());
    case descriptor::kind::product:
      return value::pair(random_value(d.left(), depth), random_value(d.right(), depth));
    case descriptor::kind::sequence: {
      std::vector<value> prefix;
      for (std::size_t i = 0; i < depth; ++i) prefix.push_back(random_value(d.element(), depth));
      return value::from_prefix(std::move(prefix), default_value(d));
    }
  }
  return default_value(d);
}

/// A copy of v that agrees with it at p and is random beyond.
inline value perturb_beyond(const descriptor& d, const value& v, const precision& p, std::size_t depth = 12) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return v;
    case descriptor::kind::product:
      return value::pair(perturb_beyond(d.left(), v.first(), p.first(), depth),
                         perturb_beyond(d.right(), v.second(), p.second(), depth));
    case descriptor::kind::sequence: {
      std::vector<value> prefix;
      std::size_t n = std::max(depth, p.length());
      for (std::size_t i = 0; i < n; ++i) {
        prefix.push_back(i < p.length() ? perturb_beyond(d.element(), v.at(i), p.element(), depth)
                                        : random_value(d.element(), depth));
      }
      return value::from_prefix(std::move(prefix), default_value(d));
    }
  }
  return v;
}

inline std::vector<digit> digits_of(const value& v, std::size_t n) {
  std::vector<digit> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(index_to_digit(v.at(i).index()));
  return out;
}

/// Canonical key of the part of v observable at p.
inline void observe(const descriptor& d, const value& v, const precision& p, std::vector<std::size_t>& key) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      key.push_back(v.index());
      return;
    case descriptor::kind::product:
      observe(d.left(), v.first(), p.first(), key);
      observe(d.right(), v.second(), p.second(), key);
      return;
    case descriptor::kind::sequence:
      for (std::size_t i = 0; i < p.length(); ++i) observe(d.element(), v.at(i), p.element(), key);
      return;
  }
}

/// A random predicate depending only on what is observable at `modulus`:
/// true on each class with probability `density`, decided by a lazily filled
/// table so repeated queries agree.
inline continuous_predicate random_predicate(const descriptor& d, const precision& modulus, double density) {
  auto table = std::make_shared<std::map<std::vector<std::size_t>, bool>>();
  auto seed = uniform(0, ~0ull);
  return {[d, modulus, table, seed, density](const value& v) {
            std::vector<std::size_t> key;
            observe(d, v, modulus, key);
            auto it = table->find(key);
            if (it != table->end()) return it->second;
            std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
            words.insert(words.end(), key.begin(), key.end());
            std::seed_seq ss(words.begin(), words.end());
            std::mt19937_64 local(ss);
            bool b = std::uniform_real_distribution<double>(0, 1)(local) < density;
            (*table)[key] = b;
            return b;
          },
          modulus};
}

/// Random precision matching d with sequence lengths at most max_len.
inline precision random_precision(const descriptor& d, std::size_t max_len) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return precision::unit();
    case descriptor::kind::product:
      return precision::pair(random_precision(d.left(), max_len), random_precision(d.right(), max_len));
    case descriptor::kind::sequence:
      return precision::seq(uniform(0, max_len), random_precision(d.element(), max_len));
  }
  return precision::unit();
}

}  // namespace support
