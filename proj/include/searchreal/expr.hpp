#pragma once

// A prefix-syntax expression language over the signed-digit operations:
//
//   expr    := literal | ident | mid(expr, expr) | mul(expr, expr)
//            | neg(expr) | half(expr) | pow(expr, n)
//   literal := ['-'] digits ['/' digits] | ['-'] digits '.' digits
//   program := expr { ';' expr }
//
// Literals lie in [-1, 1], decimals have at most 12 places, exponents are at
// least 1, and every identifier must be a declared variable.

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "searchreal/errors.hpp"
#include "searchreal/reals.hpp"

namespace searchreal::expr {

class parse_error : public std::invalid_argument {
 public:
  parse_error(const std::string& message, std::size_t line, std::size_t column)
      : std::invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct node;
using expr = std::shared_ptr<const node>;

struct rational_lit {
  rational value;
};
struct var {
  std::string name;
  std::size_t index;
};
struct mid {
  expr left, right;
};
struct mul {
  expr left, right;
};
struct neg {
  expr arg;
};
struct halve {
  expr arg;
};
struct pow {
  expr base;
  std::size_t exponent;
};

struct node {
  std::variant<rational_lit, var, mid, mul, neg, halve, pow> v;
};

struct program {
  std::vector<std::string> variables;
  std::vector<expr> components;
};

inline expr make(decltype(node::v) v) { return std::make_shared<const node>(node{std::move(v)}); }

// ---------------------------------------------------------------------------
// equality and printing

inline bool equal(const expr& a, const expr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->v);
        if constexpr (std::is_same_v<T, rational_lit>) return x.value == y.value;
        if constexpr (std::is_same_v<T, var>) return x.name == y.name && x.index == y.index;
        if constexpr (std::is_same_v<T, mid> || std::is_same_v<T, mul>)
          return equal(x.left, y.left) && equal(x.right, y.right);
        if constexpr (std::is_same_v<T, neg> || std::is_same_v<T, halve>) return equal(x.arg, y.arg);
        if constexpr (std::is_same_v<T, pow>) return x.exponent == y.exponent && equal(x.base, y.base);
      },
      a->v);
}

inline bool equal(const program& a, const program& b) {
  if (a.variables != b.variables || a.components.size() != b.components.size()) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    if (!equal(a.components[i], b.components[i])) return false;
  }
  return true;
}

inline std::string print(const expr& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, rational_lit>) return rational_string(x.value);
        if constexpr (std::is_same_v<T, var>) return x.name;
        if constexpr (std::is_same_v<T, mid>) return "mid(" + print(x.left) + ", " + print(x.right) + ")";
        if constexpr (std::is_same_v<T, mul>) return "mul(" + print(x.left) + ", " + print(x.right) + ")";
        if constexpr (std::is_same_v<T, neg>) return "neg(" + print(x.arg) + ")";
        if constexpr (std::is_same_v<T, halve>) return "half(" + print(x.arg) + ")";
        if constexpr (std::is_same_v<T, pow>)
          return "pow(" + print(x.base) + ", " + std::to_string(x.exponent) + ")";
      },
      e->v);
}

inline std::string print(const program& p) {
  std::string out;
  for (std::size_t i = 0; i < p.components.size(); ++i) {
    if (i) out += "; ";
    out += print(p.components[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace detail {

class parser {
 public:
  parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  program parse_program() {
    program out{vars_, {}};
    out.components.push_back(parse_expr());
    skip_space();
    while (peek() == ';') {
      advance();
      out.components.push_back(parse_expr());
      skip_space();
    }
    if (!at_end()) fail("unexpected '" + std::string(1, peek()) + "'");
    return out;
  }

 private:
  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void fail(const std::string& message) const { throw parse_error(message, line_, column_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t line, std::size_t column) const {
    throw parse_error(message, line, column);
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) {
      if (at_end()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "', found '" + peek() + "'");
    }
    advance();
  }

  std::string digits() {
    std::string out;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      out += peek();
      advance();
    }
    return out;
  }

  expr parse_expr() {
    skip_space();
    if (at_end()) fail("expected an expression");
    char c = peek();
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_literal();
    if (std::islower(static_cast<unsigned char>(c))) return parse_word();
    fail(std::string("unexpected '") + c + "'");
  }

  // Decimal digit string to integer; leading zeros would read as octal.
  static big_int decimal_int(const std::string& ds) {
    std::size_t i = ds.find_first_not_of('0');
    return i == std::string::npos ? big_int(0) : big_int(ds.substr(i));
  }

  expr parse_literal() {
    std::size_t line = line_, column = column_;
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      advance();
    }
    std::string whole = digits();
    if (whole.empty()) fail("expected digits");
    rational value;
    if (peek() == '/') {
      advance();
      std::string den = digits();
      if (den.empty()) fail("expected a denominator");
      big_int d = decimal_int(den);
      if (d == 0) fail_at("zero denominator", line, column);
      value = rational(decimal_int(whole), d);
    } else if (peek() == '.') {
      advance();
      std::string frac = digits();
      if (frac.empty()) fail("expected digits after '.'");
      if (frac.size() > 12) fail_at("decimal literal has more than 12 places", line, column);
      big_int scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      value = rational(decimal_int(whole + frac), scale);
    } else {
      value = rational(decimal_int(whole));
    }
    if (negative) value = -value;
    if (value > 1 || value < -1) fail_at("literal " + rational_string(value) + " outside [-1, 1]", line, column);
    return make(rational_lit{value});
  }

  expr parse_word() {
    std::size_t line = line_, column = column_;
    std::string name;
    while (!at_end() && (std::islower(static_cast<unsigned char>(peek())) ||
                         std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) {
      name += peek();
      advance();
    }
    skip_space();
    if (peek() == '(') {
      advance();
      if (name == "mid" || name == "mul") {
        expr a = parse_expr();
        expect(',');
        expr b = parse_expr();
        expect(')');
        return name == "mid" ? make(mid{a, b}) : make(mul{a, b});
      }
      if (name == "neg" || name == "half") {
        expr a = parse_expr();
        expect(')');
        return name == "neg" ? make(neg{a}) : make(halve{a});
      }
      if (name == "pow") {
        expr a = parse_expr();
        expect(',');
        skip_space();
        std::size_t el = line_, ec = column_;
        std::string n = digits();
        if (n.empty()) fail("expected an exponent");
        if (n.size() > 6) fail_at("exponent too large", el, ec);
        std::size_t exponent = std::stoul(n);
        if (exponent == 0) fail_at("exponent must be at least 1", el, ec);
        expect(')');
        return make(pow{a, exponent});
      }
      fail_at("unknown function '" + name + "'", line, column);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return make(var{name, i});
    }
    fail_at("undeclared variable '" + name + "'", line, column);
  }
};

inline bool valid_identifier(const std::string& name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  }
  return name != "mid" && name != "mul" && name != "neg" && name != "half" && name != "pow";
}

}  // namespace detail

inline program parse(std::string_view text, const std::vector<std::string>& variables = {}) {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (!detail::valid_identifier(variables[i])) {
      throw parse_error("invalid variable name '" + variables[i] + "'", 0, 0);
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (variables[j] == variables[i]) throw parse_error("duplicate variable '" + variables[i] + "'", 0, 0);
    }
  }
  return detail::parser(text, variables).parse_program();
}

// ---------------------------------------------------------------------------
// evaluation

inline i_real evaluate(const expr& e, const std::vector<i_real>& env) {
  return std::visit(
      [&](const auto& x) -> i_real {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, rational_lit>) return i_from_rational(x.value);
        if constexpr (std::is_same_v<T, var>) {
          if (x.index >= env.size()) throw domain_error("no binding for variable '" + x.name + "'");
          return env[x.index];
        }
        if constexpr (std::is_same_v<T, mid>) return midpoint(evaluate(x.left, env), evaluate(x.right, env));
        if constexpr (std::is_same_v<T, mul>) return multiply(evaluate(x.left, env), evaluate(x.right, env));
        if constexpr (std::is_same_v<T, neg>) return negate(evaluate(x.arg, env));
        if constexpr (std::is_same_v<T, halve>) return searchreal::halve(evaluate(x.arg, env));
        if constexpr (std::is_same_v<T, pow>) {
          // x^n = x * x^(n-1); the base is evaluated once and shared.
          i_real base = evaluate(x.base, env);
          i_real acc = base;
          for (std::size_t i = 1; i < x.exponent; ++i) acc = multiply(base, acc);
          return acc;
        }
      },
      e->v);
}

inline std::vector<i_real> evaluate(const program& p, const std::vector<i_real>& env) {
  std::vector<i_real> out;
  for (const expr& e : p.components) out.push_back(evaluate(e, env));
  return out;
}

inline std::vector<i_real> evaluate(const program& p, const std::map<std::string, i_real>& env) {
  std::vector<i_real> values;
  for (const std::string& name : p.variables) {
    auto it = env.find(name);
    if (it == env.end()) throw domain_error("no binding for variable '" + name + "'");
    values.push_back(it->second);
  }
  return evaluate(p, values);
}

// ---------------------------------------------------------------------------
// moduli

namespace detail {

inline void modulus_into(const expr& e, std::size_t n, std::vector<std::size_t>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, var>) {
          out[x.index] = std::max(out[x.index], n);
        } else if constexpr (std::is_same_v<T, mid>) {
          modulus_into(x.left, midpoint_modulus(n), out);
          modulus_into(x.right, midpoint_modulus(n), out);
        } else if constexpr (std::is_same_v<T, mul>) {
          modulus_into(x.left, multiply_modulus(n), out);
          modulus_into(x.right, multiply_modulus(n), out);
        } else if constexpr (std::is_same_v<T, neg>) {
          modulus_into(x.arg, n, out);
        } else if constexpr (std::is_same_v<T, halve>) {
          modulus_into(x.arg, halve_modulus(n), out);
        } else if constexpr (std::is_same_v<T, pow>) {
          // the base feeds each multiply of the unfolded chain; the deepest
          // operand sits under exponent - 1 multiplies
          std::size_t m = n;
          for (std::size_t i = 1; i < x.exponent; ++i) m = multiply_modulus(m);
          modulus_into(x.base, m, out);
        }
      },
      e->v);
}

}  // namespace detail

/// Digits of each variable needed for n digits of e.
inline std::vector<std::size_t> modulus_of(const expr& e, std::size_t variables, std::size_t n) {
  std::vector<std::size_t> out(variables, 0);
  detail::modulus_into(e, n, out);
  return out;
}

/// Digits of each variable needed for digits[i] digits of component i.
inline std::vector<std::size_t> modulus_of(const program& p, const std::vector<std::size_t>& digits) {
  if (digits.size() != p.components.size()) throw structural_error("one precision per component expected");
  std::vector<std::size_t> out(p.variables.size(), 0);
  for (std::size_t i = 0; i < digits.size(); ++i) detail::modulus_into(p.components[i], digits[i], out);
  return out;
}

inline std::vector<std::size_t> modulus_of(const program& p, std::size_t n) {
  return modulus_of(p, std::vector<std::size_t>(p.components.size(), n));
}

}  // namespace searchreal::expr
