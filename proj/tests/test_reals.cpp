#include <catch_amalgamated.hpp>

#include "searchreal/oracle.hpp"
#include "searchreal/reals.hpp"
#include "support.hpp"

using namespace searchreal;
using support::oracle_prefix;
using support::random_rational;
using support::to_oracle;
namespace o = searchreal::oracle;

namespace {

std::vector<int> code(const i_real& x, std::size_t n) {
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(x[i]);
  return out;
}

std::vector<int> code(const u_real& x, std::size_t n) {
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(x[i]);
  return out;
}

// Input stream whose reads are counted.
struct watched {
  i_real x;
  std::size_t read() const { return x.digits().evaluated(); }
};

watched watch(std::size_t seed_digits = 64) { return {support::random_i_real(seed_digits)}; }

}  // namespace

TEST_CASE("conversions from rationals") {
  CHECK(code(i_from_rational(rational(1, 2)), 4) == std::vector<int>{1, 0, 0, 0});
  CHECK(code(i_from_rational(rational(-3, 4)), 4) == std::vector<int>{-1, -1, 0, 0});
  CHECK(code(u_from_rational(rational(1, 3)), 6) == std::vector<int>{0, 1, 0, 1, 0, 1});
  CHECK(code(i_one(), 5) == std::vector<int>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(i_from_rational(rational(5, 4)), domain_error);
  CHECK_THROWS_AS(u_from_rational(rational(-1, 4)), domain_error);
  CHECK_THROWS_AS(i_from_rational(big_int(1), big_int(0)), domain_error);

  for (int trial = 0; trial < 500; ++trial) {
    rational r = random_rational(10);
    CHECK(o::abs(oracle_prefix(i_from_rational(r), 24) - to_oracle(r)) <= o::pow2(-24));
  }
}

TEST_CASE("eval_prefix and decimal rendering") {
  i_real x = from_prefix<i_real>({1, -1, 1});
  CHECK(eval_prefix(x, 3) == rational(3, 8));
  CHECK(eval_prefix(x, 0) == 0);
  CHECK(to_decimal(rational(3, 8)) == "0.375");
  CHECK(to_decimal(rational(-1, 4)) == "-0.25");
  CHECK(to_decimal(rational(0)) == "0");
  CHECK_THROWS_AS(to_decimal(rational(1, 3)), domain_error);
  CHECK(rational_string(rational(-6, 8)) == "-3/4");
}

TEST_CASE("midpoint, negate and multiply match the rational oracle") {
  detail::carry_violations() = 0;
  for (int trial = 0; trial < 300; ++trial) {
    rational a = random_rational(10), b = random_rational(10);
    i_real x = i_from_rational(a), y = i_from_rational(b);
    o::rational oa = to_oracle(a), ob = to_oracle(b);

    CHECK(o::abs(oracle_prefix(midpoint(x, y), 20) - o::mid(oa, ob)) <= o::pow2(-19));
    CHECK(oracle_prefix(negate(x), 20) == -oracle_prefix(x, 20));
    CHECK(o::abs(oracle_prefix(multiply(x, y), 20) - oa * ob) <= o::pow2(-18));
  }
  CHECK(midpoint_carry_violations() == 0);
}

TEST_CASE("arithmetic on arbitrary digit codes") {
  // redundant codes, not just greedy expansions
  for (int trial = 0; trial < 200; ++trial) {
    i_real x = support::random_i_real(40), y = support::random_i_real(40);
    o::rational vx = oracle_prefix(x, 40), vy = oracle_prefix(y, 40);
    CHECK(o::abs(oracle_prefix(midpoint(x, y), 24) - o::mid(vx, vy)) <= o::pow2(-23));
    CHECK(o::abs(oracle_prefix(multiply(x, y), 24) - vx * vy) <= o::pow2(-22));
    CHECK(o::abs(oracle_prefix(halve(x), 24) - vx * o::rational(1, 2)) <= o::pow2(-23));
  }
}

TEST_CASE("multiply equals its fuel-indexed form digit for digit") {
  for (int trial = 0; trial < 100; ++trial) {
    i_real x = support::random_i_real(40), y = support::random_i_real(40);
    CHECK(code(multiply(x, y), 24) == code(multiply_fueled(x, y), 24));
  }
}

TEST_CASE("three-way scaled addition") {
  for (int trial = 0; trial < 100; ++trial) {
    rational a = random_rational(8), b = random_rational(8), c = random_rational(8);
    o::rational expect = (to_oracle(a) + to_oracle(b) + to_oracle(c)) * o::rational(1, 4);
    auto s = add3_scaled(i_from_rational(a), i_from_rational(b), i_from_rational(c));
    CHECK(o::abs(oracle_prefix(s, 20) - expect) <= o::pow2(-18));
  }
}

TEST_CASE("truncation acts on digit codes") {
  CHECK(code(truncate(from_prefix<i_real>({1, -1, 0, 1})), 4) == std::vector<int>{1, 0, 0, 1});
  CHECK(code(truncate(i_from_rational(rational(-1, 2))), 4) == std::vector<int>{0, 0, 0, 0});
  // square of 1/2 is coded 1, -1, 0, ...; its truncation is 1/2, not 1/4
  i_real sq = multiply(i_from_rational(rational(1, 2)), i_from_rational(rational(1, 2)));
  CHECK(code(sq, 4) == std::vector<int>{1, -1, 0, 0});
  CHECK(eval_prefix(truncate(sq), 8) == rational(1, 2));
  // the truncation never lies below the value it truncates
  for (int trial = 0; trial < 200; ++trial) {
    i_real x = support::random_i_real(30);
    CHECK(oracle_prefix(truncate(x), 30) >= oracle_prefix(x, 30));
    CHECK(oracle_prefix(truncate(x), 30) >= 0);
  }
}

TEST_CASE("unit order") {
  u_real a = u_from_rational(rational(1, 4)), b = u_from_rational(rational(1, 2));
  CHECK(u_lt(a, b, 2));
  CHECK_FALSE(u_lt(b, a, 2));
  CHECK_FALSE(u_lt(u_from_rational(rational(1, 8)), a, 1));  // both start with 0
  CHECK(u_lt(u_from_rational(rational(1, 8)), a, 2));
  CHECK(u_leq(a, b, 1));
  CHECK(u_leq(a, a, 10));
  CHECK_FALSE(u_lt(a, a, 10));
  CHECK_FALSE(u_lt(u_zero(), u_zero(), 10));
  // the order is the lexicographic order of the first p digits
  for (int trial = 0; trial < 300; ++trial) {
    auto da = support::random_digits(8, false), db = support::random_digits(8, false);
    u_real x = from_prefix<u_real>(da), y = from_prefix<u_real>(db);
    std::size_t p = support::uniform(0, 8);
    o::rational vx = oracle_prefix(x, p), vy = oracle_prefix(y, p);
    CHECK(u_lt(x, y, p) == (vx < vy));
    CHECK(u_leq(x, y, p) == (vx <= vy));
    CHECK((u_leq(x, y, p) || u_leq(y, x, p)));
  }
  // consistency with the oracle on 1/3
  u_real third = u_from_rational(rational(1, 3));
  for (std::size_t p = 1; p < 12; ++p) {
    u_real pre = from_prefix<u_real>(std::vector<digit>(third.prefix(p)));
    CHECK(compare(oracle_prefix(pre, p), o::rational(1, 3)) < 0);
    CHECK_FALSE(u_lt(pre, third, p));
  }
}

TEST_CASE("signed order through the unit embedding") {
  CHECK(i_lt(i_from_rational(rational(-1, 2)), i_from_rational(rational(1, 2)), 4));
  CHECK_FALSE(i_lt(i_from_rational(rational(1, 2)), i_from_rational(rational(-1, 2)), 4));
  CHECK(i_leq(i_zero(), from_prefix<i_real>({1, -1}), 4));  // 1, -1 codes 1/4
  CHECK(i_leq(from_prefix<i_real>({1, -1}), from_prefix<i_real>({0, 1}), 4));
  CHECK(i_leq(from_prefix<i_real>({0, 1}), from_prefix<i_real>({1, -1}), 4));
}

TEST_CASE("embedding into Seq(Fin(3))") {
  CHECK(index_to_digit(0) == 0);
  CHECK(index_to_digit(1) == 1);
  CHECK(index_to_digit(2) == -1);
  for (digit d : {-1, 0, 1}) CHECK(index_to_digit(digit_to_index(d)) == d);
  CHECK(code(i_from_value(default_value(i_descriptor())), 6) == std::vector<int>(6, 0));
  i_real x = support::random_i_real(20);
  CHECK(code(i_from_value(to_value(x)), 20) == code(x, 20));
  u_real u = from_prefix<u_real>({1, 0, 1});
  CHECK(code(u_from_value(to_value(u)), 3) == std::vector<int>{1, 0, 1});
}

TEST_CASE("moduli bound the digits actually read") {
  for (std::size_t n = 0; n < 24; ++n) {
    auto a = watch(), b = watch();
    (void)midpoint(a.x, b.x).prefix(n);
    CHECK(a.read() <= midpoint_modulus(n));
    CHECK(b.read() <= midpoint_modulus(n));

    auto c = watch(), d = watch();
    (void)multiply(c.x, d.x).prefix(n);
    CHECK(c.read() <= multiply_modulus(n));
    CHECK(d.read() <= multiply_modulus(n));

    auto e = watch();
    (void)negate(e.x).prefix(n);
    CHECK(e.read() <= n);

    auto f = watch();
    (void)halve(f.x).prefix(n);
    CHECK(f.read() <= halve_modulus(n));
  }
}

TEST_CASE("moduli are honest on codes agreeing up to the modulus") {
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = support::uniform(0, 16);
    auto px = support::random_digits(multiply_modulus(n)), py = support::random_digits(multiply_modulus(n));
    i_real x1 = support::random_i_real_with_prefix(px), x2 = support::random_i_real_with_prefix(px);
    i_real y1 = support::random_i_real_with_prefix(py), y2 = support::random_i_real_with_prefix(py);
    CHECK(eq_prefix(multiply(x1, y1), multiply(x2, y2), n));

    std::vector<digit> mx(px.begin(), px.begin() + midpoint_modulus(n));
    std::vector<digit> my(py.begin(), py.begin() + midpoint_modulus(n));
    CHECK(eq_prefix(midpoint(support::random_i_real_with_prefix(mx), support::random_i_real_with_prefix(my)),
                    midpoint(support::random_i_real_with_prefix(mx), support::random_i_real_with_prefix(my)), n));
  }
}

TEST_CASE("midpoint of a stream and its negation is the zero code") {
  for (int trial = 0; trial < 50; ++trial) {
    i_real x = support::random_i_real(30);
    CHECK(code(midpoint(x, negate(x)), 30) == std::vector<int>(30, 0));
    CHECK(code(multiply(i_zero(), x), 30) == std::vector<int>(30, 0));
  }
}
