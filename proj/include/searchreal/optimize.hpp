#pragma once

// Deterministic, complete global argmin of continuous functions into the unit
// interval, built by induction on the searchable type of the domain.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "searchreal/errors.hpp"
#include "searchreal/reals.hpp"
#include "searchreal/searcher.hpp"
#include "searchreal/stype.hpp"

namespace searchreal {

/// f : domain -> U with its modulus: values equal at `modulus_for(p)` have
/// images equal on their first p digits.
struct objective_function {
  descriptor domain;
  std::function<u_real(const value&)> apply;
  std::function<precision(std::size_t)> modulus_for;
};

struct argmin_result {
  value point;
  u_real score;
  precision modulus;
  std::uint64_t evaluations = 0;
};

namespace detail {

struct scored {
  u_real score;
  value full;
};

using score_fn = std::function<scored(const value&)>;

inline scored argmin_any(const descriptor& d, const score_fn& f, const precision& modulus,
                         std::size_t p);

// Linear scan; a later candidate replaces the current one only when strictly
// smaller at precision p, so ties keep the earlier index.
inline scored argmin_fin(std::size_t cardinality, const score_fn& f, std::size_t p) {
  scored best = f(value::fin(0, cardinality));
  for (std::size_t i = 1; i < cardinality; ++i) {
    scored c = f(value::fin(i, cardinality));
    if (u_lt(c.score, best.score, p)) best = std::move(c);
  }
  return best;
}

inline scored argmin_pair(const descriptor& d, const score_fn& f, const precision& modulus,
                          std::size_t p) {
  auto y_hat = [&](const value& x) {
    return argmin_any(d.right(), [&](const value& y) { return f(value::pair(x, y)); },
                      modulus.second(), p);
  };
  return argmin_any(d.left(), y_hat, modulus.first(), p);
}

inline scored argmin_seq(const descriptor& d, const score_fn& f, const precision& modulus,
                         std::size_t p) {
  if (modulus.length() == 0) return f(default_value(d));
  const precision& pe = modulus.element();
  auto x_hat = [&](const value& alpha) {
    return argmin_any(d.element(), [&](const value& x) { return f(value::cons(x, alpha)); }, pe, p);
  };
  return argmin_any(d, x_hat, precision::seq(modulus.length() - 1, pe), p);
}

inline scored argmin_any(const descriptor& d, const score_fn& f, const precision& modulus,
                         std::size_t p) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return argmin_fin(d.cardinality(), f, p);
    case descriptor::kind::product:
      return argmin_pair(d, f, modulus, p);
    case descriptor::kind::sequence:
      return argmin_seq(d, f, modulus, p);
  }
  throw structural_error("bad descriptor");
}

}  // namespace detail

/// A point k0 with f(k0) <=_p f(k) for every k, where k ranges over the
/// classes of f.modulus_for(p).
///
/// The construction evaluates f exactly once per class, so the class count is
/// checked against the budget before any work starts. Products fix the first
/// component through the argmin of the second; sequences recurse on the
/// length of the modulus, choosing the head as a function of the tail.
///
/// With several global minimisers the returned point may differ between
/// precisions; only the value-level bound is guaranteed.
inline argmin_result argmin(const objective_function& f, std::size_t p, search_budget& budget) {
  precision modulus = f.modulus_for(p);
  require_matches(f.domain, modulus);
  std::uint64_t classes = class_count(f.domain, modulus);
  if (classes > budget.limit() - budget.used()) {
    throw budget_exceeded("argmin needs " + class_count_text(f.domain, modulus) +
                              " objective evaluations, budget allows " +
                              std::to_string(budget.limit() - budget.used()),
                          classes, budget.limit());
  }
  std::uint64_t before = budget.used();
  detail::scored best = detail::argmin_any(
      f.domain,
      [&](const value& v) {
        budget.charge();
        return detail::scored{f.apply(v), v};
      },
      modulus, p);
  return {best.full, best.score, modulus, budget.used() - before};
}

inline argmin_result argmin(const objective_function& f, std::size_t p) {
  search_budget budget;
  return argmin(f, p, budget);
}

}  // namespace searchreal
