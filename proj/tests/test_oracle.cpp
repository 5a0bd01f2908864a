#include <catch_amalgamated.hpp>

#include "searchreal/oracle.hpp"
#include "searchreal/reals.hpp"

using namespace searchreal;
namespace o = searchreal::oracle;

TEST_CASE("rational arithmetic") {
  CHECK(o::mid(o::rational(1, 2), o::rational(-1, 2)) == 0);
  CHECK(o::mul(o::rational(1, 2), o::rational(1, 2)) == o::rational(1, 4));
  CHECK(o::add(o::rational(1, 3), o::rational(1, 6)) == o::rational(1, 2));
  CHECK(o::neg(o::rational(2, 4)).str() == "-1/2");
  CHECK(o::rational(6, -8).str() == "-3/4");
  CHECK_THROWS_AS(o::rational(1, 0), domain_error);
  CHECK(compare(o::rational(1, 3), o::rational(1, 3)) == 0);
  CHECK(compare(o::rational(-1, 3), o::rational(1, 3)) < 0);
}

TEST_CASE("rational comparison agrees with the unit order on prefixes") {
  // 0.0101... is below 1/3 at every prefix, and the prefixes of 1/3 never
  // compare below 1/3 under <_p
  u_real third = u_from_rational(rational(1, 3));
  for (std::size_t p = 1; p < 16; ++p) {
    std::vector<int> ds;
    for (std::size_t i = 0; i < p; ++i) ds.push_back(third[i]);
    CHECK(compare(o::digits_value(ds), o::rational(1, 3)) < 0);
    CHECK(o::rational(1, 3) - o::digits_value(ds) <= o::pow2(-static_cast<long long>(p)));
    CHECK_FALSE(u_lt(from_prefix<u_real>(std::vector<digit>(third.prefix(p))), third, p));
  }
}

TEST_CASE("brute force search") {
  auto f4 = descriptor::finite(4);
  auto hit = o::brute_force_search(f4, precision::unit(), [](const value& v) { return v.index() == 2; });
  REQUIRE(hit);
  CHECK(hit->index() == 2);
  CHECK_FALSE(o::brute_force_search(f4, precision::unit(), [](const value&) { return false; }));

  // lexicographic order: the first digit varies slowest
  auto s3 = descriptor::sequence(descriptor::finite(3));
  auto all = o::enumerate(s3, precision::digits(2), 100);
  REQUIRE(all.size() == 9);
  CHECK(all[1].at(0).index() == 0);
  CHECK(all[1].at(1).index() == 1);
  CHECK(all[3].at(0).index() == 1);

  auto second = o::brute_force_search(s3, precision::digits(4), [](const value& v) { return v.at(3).index() == 2; });
  REQUIRE(second);
  CHECK(second->at(0).index() == 0);
  CHECK(second->at(3).index() == 2);

  CHECK_THROWS_AS(o::enumerate(s3, precision::digits(10), 1000), budget_exceeded);
}

TEST_CASE("bisection") {
  auto r = o::bisect_root([](const o::rational& x) { return x * x - o::rational(1, 4); }, 0, 1, o::pow2(-20));
  CHECK(o::abs(r - o::rational(1, 2)) <= o::pow2(-20));

  // 2x^2 - x/2 - 1 has the root (1 + sqrt(33)) / 8 = 0.8430703308...
  auto q = o::bisect_root(
      [](const o::rational& x) { return o::rational(2) * x * x - x * o::rational(1, 2) - 1; }, 0, 1, o::pow2(-30));
  CHECK(q > o::rational(8430703, 10000000));
  CHECK(q < o::rational(8430704, 10000000));

  CHECK_THROWS_AS(o::bisect_root([](const o::rational& x) { return x * x + 1; }, -1, 1, o::pow2(-10)), domain_error);
}
