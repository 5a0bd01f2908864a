#pragma once

// Continuous searchers for every searchable type. Finite types are scanned,
// products are searched component by component, and sequences are searched by
// induction on the length component of the predicate's modulus (the
// Tychonoff construction).

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "searchreal/errors.hpp"
#include "searchreal/stype.hpp"

namespace searchreal {

inline constexpr std::uint64_t default_budget = 10'000'000;

/// Counts evaluations of user-supplied predicates or objectives and throws
/// budget_exceeded once the limit would be passed.
class search_budget {
 public:
  explicit search_budget(std::uint64_t limit = default_budget) : limit_(limit) {}
  search_budget(const search_budget&) = delete;
  search_budget& operator=(const search_budget&) = delete;

  void charge(std::uint64_t n = 1) {
    std::uint64_t now = used_.fetch_add(n, std::memory_order_relaxed) + n;
    if (now > limit_) {
      throw budget_exceeded("evaluation budget of " + std::to_string(limit_) + " exhausted", now,
                            limit_);
    }
  }

  std::uint64_t used() const noexcept { return used_.load(std::memory_order_relaxed); }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::atomic<std::uint64_t> used_{0};
  std::uint64_t limit_;
};

struct search_result {
  value witness;
  bool satisfied = false;
};

namespace detail {

// Outcome of evaluating the searched predicate on a candidate, together with
// the complete value the leaf predicate was decided on. Nested levels pass the
// leaf value upwards, so the final witness is never recomputed.
struct probe {
  bool ok = false;
  value full;
};

using probe_fn = std::function<probe(const value&)>;

struct located {
  value local;
  probe outcome;
};

inline located search_any(const descriptor& d, const probe_fn& test, const precision& modulus);

inline located search_fin(std::size_t cardinality, const probe_fn& test) {
  if (cardinality == 0) throw structural_error("cannot search an empty type");
  for (std::size_t i = 0; i + 1 < cardinality; ++i) {
    value x = value::fin(i, cardinality);
    probe r = test(x);
    if (r.ok) return {x, std::move(r)};
  }
  value last = value::fin(cardinality - 1, cardinality);
  return {last, test(last)};
}

// y^(x) = E_right(y -> P(x, y)); x_e = E_left(x -> P(x, y^(x))); (x_e, y^(x_e)).
inline located search_pair(const descriptor& left, const descriptor& right, const probe_fn& test,
                           const precision& modulus) {
  const precision& pr = modulus.second();
  auto y_hat = [&](const value& x) {
    return search_any(right, [&](const value& y) { return test(value::pair(x, y)); }, pr);
  };
  located xr = search_any(left, [&](const value& x) { return y_hat(x).outcome; }, modulus.first());
  return {xr.outcome.full, xr.outcome};
}

// Induction on the length n of the modulus (n, e). For n = 0 the default
// sequence is returned. Otherwise x^(a) = E_elem(x -> P(x :: a)), the tail
// a_t is searched at (n - 1, e) for a -> P(x^(a) :: a), and the witness is
// x^(a_t) :: a_t.
inline located search_seq(const descriptor& d, const probe_fn& test, const precision& modulus) {
  if (modulus.length() == 0) {
    value v = default_value(d);
    return {v, test(v)};
  }
  const descriptor& elem = d.element();
  const precision& pe = modulus.element();
  auto x_hat = [&](const value& alpha) {
    return search_any(elem, [&](const value& x) { return test(value::cons(x, alpha)); }, pe);
  };
  precision shorter = precision::seq(modulus.length() - 1, pe);
  located tail = search_any(d, [&](const value& alpha) { return x_hat(alpha).outcome; }, shorter);
  return {tail.outcome.full, tail.outcome};
}

inline located search_any(const descriptor& d, const probe_fn& test, const precision& modulus) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return search_fin(d.cardinality(), test);
    case descriptor::kind::product:
      return search_pair(d.left(), d.right(), test, modulus);
    case descriptor::kind::sequence:
      return search_seq(d, test, modulus);
  }
  throw structural_error("bad descriptor");
}

}  // namespace detail

/// Searches for a value satisfying P. When one exists the witness satisfies
/// P; otherwise the witness is the fallback of the construction and
/// `satisfied` is false. Always `satisfied == P.decide(witness)`.
///
/// Finite types are scanned in ascending index order and fall back to the last
/// index. Each evaluation of P is charged to `budget`.
inline search_result search(const descriptor& d, const continuous_predicate& P,
                            search_budget& budget) {
  require_matches(d, P.modulus);
  detail::located r = detail::search_any(
      d,
      [&](const value& v) {
        budget.charge();
        return detail::probe{P.decide(v), v};
      },
      P.modulus);
  return {r.outcome.full, r.outcome.ok};
}

inline search_result search(const descriptor& d, const continuous_predicate& P) {
  search_budget budget;
  return search(d, P, budget);
}

inline search_result search_finite(std::size_t cardinality, const continuous_predicate& P,
                                   search_budget& budget) {
  if (cardinality == 0) throw structural_error("cannot search an empty type");
  return search(descriptor::finite(cardinality), P, budget);
}

inline search_result search_product(const descriptor& left, const descriptor& right,
                                    const continuous_predicate& P, search_budget& budget) {
  return search(descriptor::product(left, right), P, budget);
}

inline search_result search_sequence(const descriptor& element, const continuous_predicate& P,
                                     search_budget& budget) {
  return search(descriptor::sequence(element), P, budget);
}

}  // namespace searchreal
