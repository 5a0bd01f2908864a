#pragma once

// Parametric regression over searchable parameter types: models, oracles,
// losses and distortions, the regressors, and the data-driven oracle used for
// offline fitting.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "searchreal/errors.hpp"
#include "searchreal/optimize.hpp"
#include "searchreal/reals.hpp"
#include "searchreal/searcher.hpp"
#include "searchreal/stype.hpp"

namespace searchreal {

/// A function between searchable types. `modulus_for` is optional and only
/// present for fully continuous oracles.
struct oracle_function {
  descriptor domain;
  descriptor codomain;
  std::function<value(const value&)> apply;
  std::function<precision(const precision&)> modulus_for;
};

/// k |-> M_k. Weak continuity: parameters equal at weak_modulus_for(q) give
/// functions whose outputs agree at q on every input.
struct model {
  descriptor params;
  std::function<oracle_function(const value&)> instantiate;
  std::function<precision(const precision&)> weak_modulus_for;
};

/// Phi(f, g) in U. If g and h agree at modulus_for(p) on every input then
/// Phi(f, g) and Phi(f, h) agree on p digits.
struct loss_function {
  std::function<u_real(const oracle_function&, const oracle_function&)> apply;
  std::function<precision(std::size_t)> modulus_for;
};

struct distortion {
  std::function<oracle_function(const oracle_function&)> apply;
};

struct regression_problem {
  model m;
  oracle_function oracle;
  loss_function loss;
  u_real epsilon;
  std::size_t precision = 0;
  std::vector<value> sample_points;
};

// ---------------------------------------------------------------------------
// tuples of reals as right-nested products: I, I x I, I x (I x I), ...

inline descriptor i_tuple_descriptor(std::size_t k) {
  if (k == 0) throw structural_error("empty tuple of reals");
  descriptor d = i_descriptor();
  for (std::size_t i = 1; i < k; ++i) d = descriptor::product(i_descriptor(), d);
  return d;
}

inline precision i_tuple_precision(const std::vector<std::size_t>& digits) {
  if (digits.empty()) throw structural_error("empty tuple of reals");
  precision p = precision::digits(digits.back());
  for (std::size_t i = digits.size() - 1; i-- > 0;) p = precision::pair(precision::digits(digits[i]), p);
  return p;
}

inline std::vector<std::size_t> i_tuple_digits(const precision& p, std::size_t k) {
  std::vector<std::size_t> out;
  precision cur = p;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    out.push_back(cur.first().length());
    precision next = cur.second();
    cur = next;
  }
  out.push_back(cur.length());
  return out;
}

inline value pack_reals(const std::vector<i_real>& xs) {
  if (xs.empty()) throw structural_error("empty tuple of reals");
  value v = to_value(xs.back());
  for (std::size_t i = xs.size() - 1; i-- > 0;) v = value::pair(to_value(xs[i]), v);
  return v;
}

inline std::vector<i_real> unpack_reals(const value& v, std::size_t k) {
  std::vector<i_real> out;
  value cur = v;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    out.push_back(i_from_value(cur.first()));
    value next = cur.second();
    cur = next;
  }
  out.push_back(i_from_value(cur));
  return out;
}

// Balanced midpoint tree over xs, padded with zeros to a power of two; the
// result is (sum xs) / 2^depth.
inline std::size_t tree_depth(std::size_t n) {
  std::size_t depth = 0;
  while ((std::size_t{1} << depth) < n) ++depth;
  return depth;
}

inline i_real balanced_average(std::vector<i_real> xs) {
  if (xs.empty()) throw domain_error("balanced_average of nothing");
  xs.resize(std::size_t{1} << tree_depth(xs.size()), i_zero());
  while (xs.size() > 1) {
    std::vector<i_real> next;
    for (std::size_t i = 0; i < xs.size(); i += 2) next.push_back(midpoint(xs[i], xs[i + 1]));
    xs = std::move(next);
  }
  return xs.front();
}

// Modulus of balanced_average over n inputs: one midpoint per level.
inline std::size_t balanced_modulus(std::size_t n, std::size_t digits) {
  for (std::size_t i = 0, depth = tree_depth(n); i < depth; ++i) digits = midpoint_modulus(digits);
  return digits;
}

inline oracle_function real_function(std::function<i_real(const i_real&)> f) {
  return {i_descriptor(), i_descriptor(),
          [f = std::move(f)](const value& v) { return to_value(f(i_from_value(v))); },
          nullptr};
}

inline i_real apply_real(const oracle_function& f, const i_real& x) {
  return i_from_value(f.apply(to_value(x)));
}

// ---------------------------------------------------------------------------
// losses

/// Phi(f, g) = truncate of the balanced average over the samples x_i of
/// d_i * d_i, where d_i = midpoint(f(x_i), -g(x_i)). Functions are I -> I.
inline loss_function least_squares_loss(std::vector<i_real> samples) {
  if (samples.empty()) throw domain_error("least_squares_loss needs at least one sample point");
  std::size_t n = samples.size();
  auto apply = [samples](const oracle_function& f, const oracle_function& g) {
    std::vector<i_real> squares;
    for (const i_real& x : samples) {
      i_real d = midpoint(apply_real(f, x), negate(apply_real(g, x)));
      squares.push_back(multiply(d, d));
    }
    return truncate(balanced_average(std::move(squares)));
  };
  auto modulus = [n](std::size_t p) {
    return precision::digits(midpoint_modulus(multiply_modulus(balanced_modulus(n, p))));
  };
  return {apply, modulus};
}

/// Residual loss for equation solving: the second argument maps the single
/// point of Fin(1) to a k-tuple of residuals r_i, and the loss is the
/// truncated balanced average of the r_i * r_i. The first argument (the
/// constant zero oracle) is not inspected.
inline loss_function residual_loss(std::size_t k) {
  auto apply = [k](const oracle_function&, const oracle_function& g) {
    std::vector<i_real> squares;
    for (const i_real& r : unpack_reals(g.apply(value::fin(0, 1)), k)) squares.push_back(multiply(r, r));
    return truncate(balanced_average(std::move(squares)));
  };
  auto modulus = [k](std::size_t p) {
    std::size_t n = multiply_modulus(balanced_modulus(k, p));
    return i_tuple_precision(std::vector<std::size_t>(k, n));
  };
  return {apply, modulus};
}

// ---------------------------------------------------------------------------
// function equality at a precision

/// f(x) equal to g(x) at q for one representative x of every class of
/// domain_modulus. Continuity of both functions makes this decide f ~_q g.
inline bool approx_equal_functions(const oracle_function& f, const oracle_function& g,
                                   const precision& q, const precision& domain_modulus,
                                   search_budget& budget) {
  require_matches(f.domain, domain_modulus);
  require_matches(f.codomain, q);
  std::uint64_t classes = class_count(f.domain, domain_modulus);
  if (classes > budget.limit() - budget.used()) {
    throw budget_exceeded("approx_equal_functions needs " + class_count_text(f.domain, domain_modulus) +
                              " representatives",
                          classes, budget.limit());
  }
  for (const value& x : representatives(f.domain, domain_modulus)) {
    budget.charge();
    if (!eq_with_precision(f.codomain, f.apply(x), g.apply(x), q)) return false;
  }
  return true;
}

inline bool approx_equal_functions(const oracle_function& f, const oracle_function& g,
                                   const precision& q, const precision& domain_modulus) {
  search_budget budget;
  return approx_equal_functions(f, g, q, domain_modulus, budget);
}

// ---------------------------------------------------------------------------
// regressors

inline bool validate(const loss_function& loss, const oracle_function& psi, const oracle_function& mk,
                     const u_real& epsilon, std::size_t p) {
  return u_lt(loss.apply(psi, mk), epsilon, p);
}

/// Searches the parameters for Phi(psi, M_k) <_p epsilon. A parameter is
/// returned even when none qualifies; run validate to find out.
inline value regress_imperfect(const regression_problem& problem, const oracle_function& psi,
                               search_budget& budget) {
  const model& m = problem.m;
  const loss_function& loss = problem.loss;
  std::size_t p = problem.precision;
  continuous_predicate P{
      [&](const value& k) { return u_lt(loss.apply(psi, m.instantiate(k)), problem.epsilon, p); },
      m.weak_modulus_for(loss.modulus_for(p))};
  return search(m.params, P, budget).witness;
}

inline value regress_imperfect(const regression_problem& problem, const oracle_function& psi) {
  search_budget budget;
  return regress_imperfect(problem, psi, budget);
}

/// The perfect-model regressor: the undistorted oracle is its own distortion.
inline value regress_perfect(const regression_problem& problem, search_budget& budget) {
  return regress_imperfect(problem, problem.oracle, budget);
}

/// Searches the parameters for psi ~_q M_k. Each predicate evaluation checks
/// every class of domain_modulus and is charged to the same budget.
inline value regress_exact(const regression_problem& problem, const oracle_function& psi,
                           const precision& q, const precision& domain_modulus, search_budget& budget) {
  const model& m = problem.m;
  continuous_predicate P{
      [&](const value& k) {
        return approx_equal_functions(psi, m.instantiate(k), q, domain_modulus, budget);
      },
      m.weak_modulus_for(q)};
  return search(m.params, P, budget).witness;
}

inline value regress_exact(const regression_problem& problem, const oracle_function& psi,
                           const precision& q, const precision& domain_modulus) {
  search_budget budget;
  return regress_exact(problem, psi, q, domain_modulus, budget);
}

/// Argmin of k |-> Phi(oracle, M_k) under the composed modulus.
inline argmin_result min_loss_parameter(const model& m, const oracle_function& oracle,
                                        const loss_function& loss, std::size_t p,
                                        search_budget& budget) {
  objective_function f{m.params,
                       [m, oracle, loss](const value& k) { return loss.apply(oracle, m.instantiate(k)); },
                       [m, loss](std::size_t q) { return m.weak_modulus_for(loss.modulus_for(q)); }};
  return argmin(f, p, budget);
}

inline argmin_result min_loss_parameter(const model& m, const oracle_function& oracle,
                                        const loss_function& loss, std::size_t p) {
  search_budget budget;
  return min_loss_parameter(m, oracle, loss, p, budget);
}

// ---------------------------------------------------------------------------
// models

/// M_k(x) = balanced average of k_i * x^i for i = 0..degree, parameters
/// right-nested in I^(degree + 1). The average divides the polynomial by
/// 2^ceil(log2(degree + 1)); degree 0 is the constant model M_k(x) = k.
inline model polynomial_model(std::size_t degree) {
  std::size_t terms = degree + 1;
  auto instantiate = [terms](const value& k) {
    std::vector<i_real> coeffs = unpack_reals(k, terms);
    return real_function([coeffs](const i_real& x) {
      std::vector<i_real> parts;
      i_real power = x;
      parts.push_back(coeffs[0]);
      for (std::size_t i = 1; i < coeffs.size(); ++i) {
        parts.push_back(multiply(coeffs[i], power));
        if (i + 1 < coeffs.size()) power = multiply(power, x);
      }
      return balanced_average(std::move(parts));
    });
  };
  auto weak = [terms](const precision& q) {
    std::size_t n = balanced_modulus(terms, q.length());
    std::vector<std::size_t> digits(terms, multiply_modulus(n));
    digits[0] = n;
    return i_tuple_precision(digits);
  };
  return {i_tuple_descriptor(terms), instantiate, weak};
}

/// Evaluates the polynomial model's output for parameters k at x.
inline i_real polynomial_value(std::size_t degree, const std::vector<i_real>& coeffs, const i_real& x) {
  return apply_real(polynomial_model(degree).instantiate(pack_reals(coeffs)), x);
}

// ---------------------------------------------------------------------------
// offline regression

/// Psi(x) = y_i for the first i with x <=_p midpoint(x_i, x_(i+1)), and the
/// last point's y otherwise. Points on a boundary are classified left. With no
/// points the oracle is the constant 0.
inline oracle_function piecewise_constant_oracle(std::vector<std::pair<i_real, i_real>> points,
                                                 std::size_t p) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (i_lt(points[i].first, points[i - 1].first, p)) {
      throw domain_error("piecewise_constant_oracle: points not sorted at index " + std::to_string(i));
    }
  }
  if (points.empty()) return real_function([](const i_real&) { return i_zero(); });
  std::vector<i_real> bounds;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    bounds.push_back(midpoint(points[i].first, points[i + 1].first));
  }
  return real_function([points = std::move(points), bounds = std::move(bounds), p](const i_real& x) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      if (i_leq(x, bounds[i], p)) return points[i].second;
    }
    return points.back().second;
  });
}

struct offline_result {
  value parameter;
  bool validated = false;
  u_real loss;
};

/// Fits m to the data through the interpolation oracle and the least-squares
/// loss at the data's x values, then validates the returned parameter.
inline offline_result offline_regress(const model& m, const std::vector<std::pair<i_real, i_real>>& points,
                                      const u_real& epsilon, std::size_t p, search_budget& budget) {
  if (points.empty()) throw domain_error("offline_regress needs at least one data point");
  std::vector<i_real> xs;
  for (const auto& pt : points) xs.push_back(pt.first);
  oracle_function psi = piecewise_constant_oracle(points, p);
  regression_problem problem{m, psi, least_squares_loss(xs), epsilon, p, {}};
  for (const auto& x : xs) problem.sample_points.push_back(to_value(x));
  value k = regress_imperfect(problem, psi, budget);
  oracle_function mk = m.instantiate(k);
  u_real loss = problem.loss.apply(psi, mk);
  return {k, u_lt(loss, epsilon, p), loss};
}

inline offline_result offline_regress(const model& m, const std::vector<std::pair<i_real, i_real>>& points,
                                      const u_real& epsilon, std::size_t p) {
  search_budget budget;
  return offline_regress(m, points, epsilon, p, budget);
}

// ---------------------------------------------------------------------------
// equation solving as degenerate regression

/// A system r(v) = 0 over variables in I: `residuals` maps the variables to
/// the k residuals, and `modulus_for` maps the residual digits needed to the
/// digits needed of each variable.
struct equation_system {
  std::size_t variables = 0;
  std::size_t equations = 0;
  std::function<std::vector<i_real>(const std::vector<i_real>&)> residuals;
  std::function<std::vector<std::size_t>(const std::vector<std::size_t>&)> modulus_for;
};

struct solve_result {
  std::vector<i_real> solution;
  u_real loss;
  precision modulus;
  std::uint64_t evaluations = 0;
};

/// The model maps variables to the residual function on Fin(1), the oracle is
/// the constant zero tuple and the loss the residual loss, so the minimum-loss
/// parameter is the variable assignment with the smallest residual.
inline model residual_model(const equation_system& sys) {
  descriptor codomain = i_tuple_descriptor(sys.equations);
  auto instantiate = [sys, codomain](const value& k) {
    std::vector<i_real> vars = unpack_reals(k, sys.variables);
    return oracle_function{descriptor::finite(1), codomain,
                           [sys, vars](const value&) { return pack_reals(sys.residuals(vars)); },
                           nullptr};
  };
  auto weak = [sys](const precision& q) {
    return i_tuple_precision(sys.modulus_for(i_tuple_digits(q, sys.equations)));
  };
  return {i_tuple_descriptor(sys.variables), instantiate, weak};
}

inline solve_result solve_system(const equation_system& sys, std::size_t p, search_budget& budget) {
  model m = residual_model(sys);
  std::vector<i_real> zeros(sys.equations, i_zero());
  oracle_function zero{descriptor::finite(1), i_tuple_descriptor(sys.equations),
                       [zeros](const value&) { return pack_reals(zeros); }, nullptr};
  argmin_result r = min_loss_parameter(m, zero, residual_loss(sys.equations), p, budget);
  return {unpack_reals(r.point, sys.variables), r.score, r.modulus, r.evaluations};
}

inline solve_result solve_system(const equation_system& sys, std::size_t p) {
  search_budget budget;
  return solve_system(sys, p, budget);
}

}  // namespace searchreal
