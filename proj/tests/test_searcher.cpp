#include <catch_amalgamated.hpp>

#include "searchreal/oracle.hpp"
#include "searchreal/searcher.hpp"
#include "support.hpp"

using namespace searchreal;

namespace {

std::vector<std::size_t> prefix_indices(const value& v, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(v.at(i).index());
  return out;
}

}  // namespace

TEST_CASE("finite search") {
  auto f4 = descriptor::finite(4);
  auto r = search(f4, {[](const value& v) { return v.index() == 2; }, precision::unit()});
  CHECK(r.satisfied);
  CHECK(r.witness.index() == 2);

  r = search(f4, {[](const value&) { return false; }, precision::unit()});
  CHECK_FALSE(r.satisfied);
  CHECK(r.witness.index() == 3);

  search_budget b;
  CHECK(search_finite(1, {[](const value&) { return false; }, precision::unit()}, b).witness.index() == 0);
  CHECK(search_finite(3, {[](const value& v) { return v.index() >= 1; }, precision::unit()}, b).witness.index() == 1);
  CHECK_THROWS_AS(search_finite(0, {[](const value&) { return true; }, precision::unit()}, b), structural_error);
}

TEST_CASE("product search") {
  auto f2 = descriptor::finite(2);
  search_budget b;
  auto diag = search_product(f2, f2,
                             {[](const value& v) { return v.first().index() == v.second().index(); },
                              precision::pair(precision::unit(), precision::unit())},
                             b);
  CHECK(diag.satisfied);
  CHECK(diag.witness.first().index() == diag.witness.second().index());

  auto anything = search_product(f2, f2, {[](const value&) { return true; }, precision::pair(precision::unit(), precision::unit())}, b);
  CHECK(anything.satisfied);
  CHECK(anything.witness.first().index() == 0);
  CHECK(anything.witness.second().index() == 0);

  auto nothing = search_product(f2, f2, {[](const value&) { return false; }, precision::pair(precision::unit(), precision::unit())}, b);
  CHECK_FALSE(nothing.satisfied);
}

TEST_CASE("sequence search") {
  search_budget b;
  auto two = search_sequence(descriptor::finite(2),
                             {[](const value& v) { return v.at(0).index() == 1 && v.at(1).index() == 0; },
                              precision::digits(2)},
                             b);
  CHECK(two.satisfied);
  CHECK(prefix_indices(two.witness, 2) == std::vector<std::size_t>{1, 0});

  auto equal01 = search_sequence(descriptor::finite(3),
                                 {[](const value& v) { return v.at(0).index() == v.at(1).index(); },
                                  precision::digits(2)},
                                 b);
  CHECK(equal01.satisfied);
  CHECK(equal01.witness.at(0).index() == equal01.witness.at(1).index());

  auto vacuous = search_sequence(descriptor::finite(3), {[](const value&) { return true; }, precision::digits(0)}, b);
  CHECK(vacuous.satisfied);
  for (std::size_t i = 0; i < 10; ++i) CHECK(vacuous.witness.at(i).index() == 0);

  auto ones = search_sequence(descriptor::finite(2),
                              {[](const value& v) {
                                 return v.at(0).index() == 1 && v.at(1).index() == 1 && v.at(2).index() == 1;
                               },
                               precision::digits(3)},
                              b);
  CHECK(ones.satisfied);
  CHECK(prefix_indices(ones.witness, 3) == std::vector<std::size_t>{1, 1, 1});
  // beyond the modulus the witness continues with the default tail
  CHECK(ones.witness.at(3).index() == 0);
  CHECK(ones.witness.at(50).index() == 0);
}

TEST_CASE("search rejects a modulus of the wrong shape") {
  CHECK_THROWS_AS(search(descriptor::finite(2), {[](const value&) { return true; }, precision::digits(1)}),
                  structural_error);
}

TEST_CASE("search agrees with brute force and meets the search condition") {
  auto f2 = descriptor::finite(2), f3 = descriptor::finite(3);
  std::vector<descriptor> shapes{descriptor::finite(5),
                                 descriptor::product(f3, descriptor::finite(4)),
                                 descriptor::sequence(f2),
                                 descriptor::sequence(f3),
                                 descriptor::product(descriptor::sequence(f2), f3),
                                 descriptor::sequence(descriptor::product(f2, f2))};
  for (const auto& d : shapes) {
    for (int trial = 0; trial < 60; ++trial) {
      precision m = support::random_precision(d, 6);
      double density = std::vector<double>{0.0, 0.01, 0.1, 0.5}[support::uniform(0, 3)];
      auto P = support::random_predicate(d, m, density);
      search_budget b;
      auto r = search(d, P, b);
      auto expected = oracle::brute_force_search(d, m, P.decide);
      CHECK(r.satisfied == expected.has_value());
      CHECK(r.satisfied == P.decide(r.witness));
      CHECK(conforms(d, r.witness));
    }
  }
}

TEST_CASE("search is continuous") {
  auto d = descriptor::sequence(descriptor::finite(3));
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = support::uniform(1, 5);
    std::size_t p = support::uniform(0, n);
    auto P = support::random_predicate(d, precision::digits(n), 0.3);
    // Q agrees with P on every class at precision p; beyond p it may look
    // at more digits without changing the answer.
    continuous_predicate Q{[P, p](const value& v) {
                             std::vector<value> prefix;
                             for (std::size_t i = 0; i < p; ++i) prefix.push_back(v.at(i));
                             // canonical representative of v's class at p
                             value rep = value::from_prefix(prefix, default_value(descriptor::sequence(descriptor::finite(3))));
                             return P.decide(rep);
                           },
                           precision::digits(n)};
    continuous_predicate Pp{Q.decide, precision::digits(p)};
    auto a = search(d, Pp);
    auto b = search(d, Q);
    CHECK(eq_with_precision(d, a.witness, b.witness, precision::digits(p)));
  }
}

TEST_CASE("search is deterministic") {
  auto d = descriptor::product(descriptor::sequence(descriptor::finite(3)), descriptor::finite(4));
  auto P = support::random_predicate(d, precision::pair(precision::digits(4), precision::unit()), 0.05);
  auto a = search(d, P), b = search(d, P);
  CHECK(eq_with_precision(d, a.witness, b.witness, precision::pair(precision::digits(30), precision::unit())));
}

TEST_CASE("search charges every evaluation to the budget") {
  auto d = descriptor::sequence(descriptor::finite(3));
  continuous_predicate never{[](const value&) { return false; }, precision::digits(6)};
  search_budget big(1000);
  auto r = search(d, never, big);
  CHECK_FALSE(r.satisfied);
  CHECK(big.used() == 729);

  search_budget small(100);
  try {
    search(d, never, small);
    FAIL("expected budget_exceeded");
  } catch (const budget_exceeded& e) {
    CHECK(e.budget() == 100);
    CHECK(e.bound() > 100);
  }
}
