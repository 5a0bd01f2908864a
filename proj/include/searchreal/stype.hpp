#pragma once

// Searchable types described at run time: finite types, binary products and
// infinite sequences, together with their exactness types (precisions),
// equality up to a precision, and predicates/maps that carry an explicit
// modulus of continuity.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "searchreal/errors.hpp"
#include "searchreal/lazy_sequence.hpp"

namespace searchreal {

// ---------------------------------------------------------------------------
// descriptor

class descriptor {
 public:
  enum class kind { finite, product, sequence };

  static descriptor finite(std::size_t cardinality);
  static descriptor product(descriptor left, descriptor right);
  static descriptor sequence(descriptor element);

  kind tag() const noexcept;
  std::size_t cardinality() const;
  const descriptor& left() const;
  const descriptor& right() const;
  const descriptor& element() const;

  std::string to_string() const;

  friend bool operator==(const descriptor& a, const descriptor& b);

 private:
  struct node;
  explicit descriptor(std::shared_ptr<const node> n) : node_(std::move(n)) {}
  const node& get() const;

  std::shared_ptr<const node> node_;
};

struct descriptor::node {
  kind tag;
  std::size_t cardinality = 0;
  descriptor left{nullptr};
  descriptor right{nullptr};
};

inline descriptor descriptor::finite(std::size_t cardinality) {
  if (cardinality == 0) throw structural_error("finite descriptor needs cardinality >= 1");
  return descriptor(std::make_shared<const node>(node{kind::finite, cardinality, descriptor{nullptr},
                                                      descriptor{nullptr}}));
}

inline descriptor descriptor::product(descriptor left, descriptor right) {
  if (!left.node_ || !right.node_) throw structural_error("product of empty descriptor");
  return descriptor(
      std::make_shared<const node>(node{kind::product, 0, std::move(left), std::move(right)}));
}

inline descriptor descriptor::sequence(descriptor element) {
  if (!element.node_) throw structural_error("sequence of empty descriptor");
  return descriptor(
      std::make_shared<const node>(node{kind::sequence, 0, std::move(element), descriptor{nullptr}}));
}

inline const descriptor::node& descriptor::get() const {
  if (!node_) throw structural_error("empty descriptor");
  return *node_;
}

inline descriptor::kind descriptor::tag() const noexcept { return node_->tag; }

inline std::size_t descriptor::cardinality() const {
  if (get().tag != kind::finite) throw structural_error("cardinality of non-finite descriptor");
  return node_->cardinality;
}

inline const descriptor& descriptor::left() const {
  if (get().tag != kind::product) throw structural_error("left of non-product descriptor");
  return node_->left;
}

inline const descriptor& descriptor::right() const {
  if (get().tag != kind::product) throw structural_error("right of non-product descriptor");
  return node_->right;
}

inline const descriptor& descriptor::element() const {
  if (get().tag != kind::sequence) throw structural_error("element of non-sequence descriptor");
  return node_->left;
}

inline std::string descriptor::to_string() const {
  switch (get().tag) {
    case kind::finite:
      return "Fin(" + std::to_string(node_->cardinality) + ")";
    case kind::product:
      return "(" + node_->left.to_string() + " x " + node_->right.to_string() + ")";
    case kind::sequence:
      return "Seq(" + node_->left.to_string() + ")";
  }
  return {};
}

inline bool operator==(const descriptor& a, const descriptor& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_ || a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case descriptor::kind::finite:
      return a.cardinality() == b.cardinality();
    case descriptor::kind::product:
      return a.left() == b.left() && a.right() == b.right();
    case descriptor::kind::sequence:
      return a.element() == b.element();
  }
  return false;
}

// ---------------------------------------------------------------------------
// precision (element of an exactness type)

class precision {
 public:
  enum class kind { unit, pair, sequence };

  static precision unit();
  static precision pair(precision first, precision second);
  static precision seq(std::size_t length, precision element);
  // SeqPrec(length, Unit), the common case for digit streams.
  static precision digits(std::size_t length) { return seq(length, unit()); }

  kind tag() const noexcept;
  const precision& first() const;
  const precision& second() const;
  std::size_t length() const;
  const precision& element() const;

  std::string to_string() const;

  friend bool operator==(const precision& a, const precision& b);

 private:
  struct node;
  explicit precision(std::shared_ptr<const node> n) : node_(std::move(n)) {}

  std::shared_ptr<const node> node_;
};

struct precision::node {
  kind tag;
  std::size_t length = 0;
  precision first{nullptr};
  precision second{nullptr};
};

inline precision::kind precision::tag() const noexcept { return node_->tag; }

inline precision precision::unit() {
  static const precision u(
      std::make_shared<const node>(node{kind::unit, 0, precision{nullptr}, precision{nullptr}}));
  return u;
}

inline precision precision::pair(precision first, precision second) {
  return precision(
      std::make_shared<const node>(node{kind::pair, 0, std::move(first), std::move(second)}));
}

inline precision precision::seq(std::size_t length, precision element) {
  return precision(
      std::make_shared<const node>(node{kind::sequence, length, std::move(element), precision{nullptr}}));
}

inline const precision& precision::first() const {
  if (tag() != kind::pair) throw structural_error("first of non-pair precision");
  return node_->first;
}

inline const precision& precision::second() const {
  if (tag() != kind::pair) throw structural_error("second of non-pair precision");
  return node_->second;
}

inline std::size_t precision::length() const {
  if (tag() != kind::sequence) throw structural_error("length of non-sequence precision");
  return node_->length;
}

inline const precision& precision::element() const {
  if (tag() != kind::sequence) throw structural_error("element of non-sequence precision");
  return node_->first;
}

inline std::string precision::to_string() const {
  switch (tag()) {
    case kind::unit:
      return "*";
    case kind::pair:
      return "(" + first().to_string() + ", " + second().to_string() + ")";
    case kind::sequence:
      return "(" + std::to_string(length()) + ", " + element().to_string() + ")";
  }
  return {};
}

inline bool operator==(const precision& a, const precision& b) {
  if (a.node_ == b.node_) return true;
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case precision::kind::unit:
      return true;
    case precision::kind::pair:
      return a.first() == b.first() && a.second() == b.second();
    case precision::kind::sequence:
      return a.length() == b.length() && a.element() == b.element();
  }
  return false;
}

// True iff the precision has the exactness shape of the descriptor.
inline bool matches(const descriptor& d, const precision& p) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return p.tag() == precision::kind::unit;
    case descriptor::kind::product:
      return p.tag() == precision::kind::pair && matches(d.left(), p.first()) &&
             matches(d.right(), p.second());
    case descriptor::kind::sequence:
      return p.tag() == precision::kind::sequence && matches(d.element(), p.element());
  }
  return false;
}

inline void require_matches(const descriptor& d, const precision& p) {
  if (!matches(d, p)) {
    throw structural_error("precision " + p.to_string() + " does not match descriptor " +
                           d.to_string());
  }
}

// The coarsest precision of a descriptor: every sequence length zero.
inline precision zero_precision(const descriptor& d) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return precision::unit();
    case descriptor::kind::product:
      return precision::pair(zero_precision(d.left()), zero_precision(d.right()));
    case descriptor::kind::sequence:
      return precision::seq(0, zero_precision(d.element()));
  }
  throw structural_error("bad descriptor");
}

// Componentwise maximum; the result is finer than both arguments.
inline precision join(const precision& a, const precision& b) {
  if (a.tag() != b.tag()) throw structural_error("join of precisions with different shapes");
  switch (a.tag()) {
    case precision::kind::unit:
      return a;
    case precision::kind::pair:
      return precision::pair(join(a.first(), b.first()), join(a.second(), b.second()));
    case precision::kind::sequence:
      return precision::seq(std::max(a.length(), b.length()), join(a.element(), b.element()));
  }
  throw structural_error("bad precision");
}

// ---------------------------------------------------------------------------
// value

class value {
 public:
  enum class kind { finite, pair, sequence };

  static value fin(std::size_t index, std::size_t cardinality);
  static value pair(value first, value second);
  static value seq(lazy_sequence<value> elements);
  // head :: tail, where tail is a sequence value.
  static value cons(value head, const value& tail);
  // prefix ++ tail, where tail is a sequence value.
  static value from_prefix(std::vector<value> prefix, const value& tail);

  kind tag() const noexcept { return static_cast<kind>(data_.index()); }
  std::size_t index() const;
  std::size_t cardinality() const;
  const value& first() const;
  const value& second() const;
  value at(std::size_t i) const;
  const lazy_sequence<value>& elements() const;

 private:
  struct fin_data {
    std::size_t index;
    std::size_t cardinality;
  };
  struct pair_data;

  using storage = std::variant<fin_data, std::shared_ptr<const pair_data>, lazy_sequence<value>>;
  explicit value(storage s) : data_(std::move(s)) {}

  storage data_;
};

struct value::pair_data {
  value first;
  value second;
};

inline value value::fin(std::size_t index, std::size_t cardinality) {
  if (index >= cardinality) throw structural_error("finite value index out of range");
  return value(fin_data{index, cardinality});
}

inline value value::pair(value first, value second) {
  return value(std::make_shared<const pair_data>(pair_data{std::move(first), std::move(second)}));
}

inline value value::seq(lazy_sequence<value> elements) { return value(std::move(elements)); }

inline value value::cons(value head, const value& tail) {
  return seq(searchreal::cons(std::move(head), tail.elements()));
}

inline value value::from_prefix(std::vector<value> prefix, const value& tail) {
  if (prefix.empty()) return tail;
  auto shared = std::make_shared<const std::vector<value>>(std::move(prefix));
  lazy_sequence<value> rest = tail.elements();
  return seq(lazy_sequence<value>([shared, rest](std::size_t i) {
    return i < shared->size() ? (*shared)[i] : rest[i - shared->size()];
  }));
}

inline std::size_t value::index() const {
  if (tag() != kind::finite) throw structural_error("index of non-finite value");
  return std::get<fin_data>(data_).index;
}

inline std::size_t value::cardinality() const {
  if (tag() != kind::finite) throw structural_error("cardinality of non-finite value");
  return std::get<fin_data>(data_).cardinality;
}

inline const value& value::first() const {
  if (tag() != kind::pair) throw structural_error("first of non-pair value");
  return std::get<1>(data_)->first;
}

inline const value& value::second() const {
  if (tag() != kind::pair) throw structural_error("second of non-pair value");
  return std::get<1>(data_)->second;
}

inline value value::at(std::size_t i) const { return elements()[i]; }

inline const lazy_sequence<value>& value::elements() const {
  if (tag() != kind::sequence) throw structural_error("elements of non-sequence value");
  return std::get<lazy_sequence<value>>(data_);
}

// Canonical default element: index 0, pairs of defaults, the constant default
// sequence.
inline value default_value(const descriptor& d) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return value::fin(0, d.cardinality());
    case descriptor::kind::product:
      return value::pair(default_value(d.left()), default_value(d.right()));
    case descriptor::kind::sequence:
      return value::seq(constant_sequence(default_value(d.element())));
  }
  throw structural_error("bad descriptor");
}

// Total for finite and product shapes; sequences are inspected to `depth`
// elements.
inline bool conforms(const descriptor& d, const value& v, std::size_t depth = 20) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      return v.tag() == value::kind::finite && v.cardinality() == d.cardinality();
    case descriptor::kind::product:
      return v.tag() == value::kind::pair && conforms(d.left(), v.first(), depth) &&
             conforms(d.right(), v.second(), depth);
    case descriptor::kind::sequence:
      if (v.tag() != value::kind::sequence) return false;
      for (std::size_t i = 0; i < depth; ++i) {
        if (!conforms(d.element(), v.at(i), depth)) return false;
      }
      return true;
  }
  return false;
}

/// Equality with precision: finite values compare exactly, pairs
/// componentwise, sequences on their first `p.length()` elements, each at
/// `p.element()`. Only finitely many elements are ever inspected.
inline bool eq_with_precision(const descriptor& d, const value& x, const value& y,
                              const precision& p) {
  switch (d.tag()) {
    case descriptor::kind::finite:
      if (p.tag() != precision::kind::unit) throw structural_error("finite needs unit precision");
      if (x.tag() != value::kind::finite || y.tag() != value::kind::finite ||
          x.cardinality() != d.cardinality() || y.cardinality() != d.cardinality()) {
        throw structural_error("finite value does not conform to " + d.to_string());
      }
      return x.index() == y.index();
    case descriptor::kind::product:
      if (p.tag() != precision::kind::pair) throw structural_error("product needs pair precision");
      return eq_with_precision(d.left(), x.first(), y.first(), p.first()) &&
             eq_with_precision(d.right(), x.second(), y.second(), p.second());
    case descriptor::kind::sequence: {
      if (p.tag() != precision::kind::sequence) {
        throw structural_error("sequence needs sequence precision");
      }
      const auto& xs = x.elements();
      const auto& ys = y.elements();
      for (std::size_t i = 0; i < p.length(); ++i) {
        if (!eq_with_precision(d.element(), xs[i], ys[i], p.element())) return false;
      }
      return true;
    }
  }
  throw structural_error("bad descriptor");
}

// ---------------------------------------------------------------------------
// representatives of the classes of equality-with-precision

namespace detail {
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}
}  // namespace detail

// Number of classes of eq_with_precision(d, ., ., p); saturates at 2^64-1.
inline std::uint64_t class_count(const descriptor& d, const precision& p) {
  require_matches(d, p);
  switch (d.tag()) {
    case descriptor::kind::finite:
      return d.cardinality();
    case descriptor::kind::product:
      return detail::saturating_mul(class_count(d.left(), p.first()),
                                    class_count(d.right(), p.second()));
    case descriptor::kind::sequence: {
      std::uint64_t per = class_count(d.element(), p.element());
      std::uint64_t total = 1;
      for (std::size_t i = 0; i < p.length(); ++i) total = detail::saturating_mul(total, per);
      return total;
    }
  }
  return 0;
}

// log2 of class_count, without saturation.
inline double log2_class_count(const descriptor& d, const precision& p) {
  require_matches(d, p);
  switch (d.tag()) {
    case descriptor::kind::finite:
      return std::log2(static_cast<double>(d.cardinality()));
    case descriptor::kind::product:
      return log2_class_count(d.left(), p.first()) + log2_class_count(d.right(), p.second());
    case descriptor::kind::sequence:
      return static_cast<double>(p.length()) * log2_class_count(d.element(), p.element());
  }
  return 0;
}

// class_count as text; "about 2^k" once it saturates.
inline std::string class_count_text(const descriptor& d, const precision& p) {
  std::uint64_t n = class_count(d, p);
  if (n < std::numeric_limits<std::uint64_t>::max()) return std::to_string(n);
  return "about 2^" + std::to_string(static_cast<long long>(std::llround(log2_class_count(d, p))));
}

// All canonical representatives (prefixes completed with defaults) of the
// classes of eq_with_precision(d, ., ., p). Callers check class_count first.
inline std::vector<value> representatives(const descriptor& d, const precision& p) {
  require_matches(d, p);
  std::vector<value> out;
  switch (d.tag()) {
    case descriptor::kind::finite:
      for (std::size_t i = 0; i < d.cardinality(); ++i) out.push_back(value::fin(i, d.cardinality()));
      break;
    case descriptor::kind::product: {
      auto ls = representatives(d.left(), p.first());
      auto rs = representatives(d.right(), p.second());
      for (const auto& l : ls) {
        for (const auto& r : rs) out.push_back(value::pair(l, r));
      }
      break;
    }
    case descriptor::kind::sequence: {
      auto elems = representatives(d.element(), p.element());
      const value tail = default_value(d);
      std::vector<std::size_t> digit(p.length(), 0);
      while (true) {
        std::vector<value> prefix;
        prefix.reserve(digit.size());
        for (std::size_t k : digit) prefix.push_back(elems[k]);
        out.push_back(value::from_prefix(std::move(prefix), tail));
        std::size_t pos = 0;
        while (pos < digit.size() && ++digit[pos] == elems.size()) digit[pos++] = 0;
        if (pos == digit.size()) break;
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// continuity wrappers

/// A total decision procedure together with its modulus of continuity: any two
/// values equal at `modulus` receive the same answer.
struct continuous_predicate {
  std::function<bool(const value&)> decide;
  precision modulus;
};

/// A map between searchable types with its modulus: `modulus_for(p)` is an
/// input precision sufficient for outputs equal at `p`.
struct continuous_map {
  std::function<value(const value&)> apply;
  descriptor source;
  descriptor target;
  std::function<precision(const precision&)> modulus_for;

  static continuous_map identity(const descriptor& d) {
    return {[](const value& v) { return v; }, d, d, [](const precision& p) { return p; }};
  }
};

// g after f; the modulus threads g's requirement through f.
inline continuous_map compose_continuous(const continuous_map& f, const continuous_map& g) {
  if (!(f.target == g.source)) {
    throw structural_error("cannot compose: " + f.target.to_string() + " vs " + g.source.to_string());
  }
  return {[fa = f.apply, ga = g.apply](const value& x) { return ga(fa(x)); }, f.source, g.target,
          [fm = f.modulus_for, gm = g.modulus_for](const precision& p) { return fm(gm(p)); }};
}

// Composing a predicate with a map: the predicate's modulus is pushed through
// the map's modulus.
inline continuous_predicate precompose(const continuous_predicate& pred, const continuous_map& f) {
  return {[d = pred.decide, a = f.apply](const value& x) { return d(a(x)); },
          f.modulus_for(pred.modulus)};
}

/// Sampled logical equivalence with precision: for every pair of samples that
/// are equal at `p` (including each sample with itself) the two predicates
/// give the same answer.
inline bool pred_equiv_with_precision(const descriptor& d, const continuous_predicate& P,
                                      const continuous_predicate& Q, const precision& p,
                                      std::span<const value> samples) {
  require_matches(d, p);
  std::vector<bool> pv, qv;
  pv.reserve(samples.size());
  qv.reserve(samples.size());
  for (const auto& s : samples) {
    pv.push_back(P.decide(s));
    qv.push_back(Q.decide(s));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (pv[i] != qv[i]) return false;
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (eq_with_precision(d, samples[i], samples[j], p) && (pv[i] != qv[j] || pv[j] != qv[i])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace searchreal
