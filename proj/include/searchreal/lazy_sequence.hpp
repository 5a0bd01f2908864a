#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace searchreal {

/// An infinite, lazily evaluated sequence whose elements are computed once and
/// cached.
///
/// The producer is invoked with indices 0, 1, 2, ... in strictly increasing
/// order, exactly once per index, so it may carry state between calls (carry
/// digits, remainders). Copies share the cache. Element queries are
/// serialised per sequence, which makes concurrent reads observe identical
/// values; producers must not read the sequence they belong to.
template <class T>
class lazy_sequence {
 public:
  using producer = std::function<T(std::size_t)>;

  lazy_sequence() = default;
  explicit lazy_sequence(producer next) : state_(std::make_shared<state>(std::move(next))) {}

  T operator[](std::size_t index) const {
    state& s = *state_;
    std::lock_guard<std::mutex> lock(s.mutex);
    while (s.memo.size() <= index) {
      s.memo.push_back(s.next(s.memo.size()));
    }
    return s.memo[index];
  }

  // Number of elements computed so far. Used to observe how deep a
  // computation has looked into its inputs.
  std::size_t evaluated() const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    return state_->memo.size();
  }

  bool valid() const noexcept { return static_cast<bool>(state_); }

  // Identity of the underlying cache; equal ids denote the same sequence.
  const void* id() const noexcept { return state_.get(); }

 private:
  struct state {
    explicit state(producer p) : next(std::move(p)) {}
    std::mutex mutex;
    std::vector<T> memo;
    producer next;
  };

  std::shared_ptr<state> state_;
};

template <class T>
lazy_sequence<T> constant_sequence(T value) {
  return lazy_sequence<T>([value](std::size_t) { return value; });
}

template <class T>
lazy_sequence<T> cons(T head, lazy_sequence<T> tail) {
  return lazy_sequence<T>([head = std::move(head), tail = std::move(tail)](std::size_t i) {
    return i == 0 ? head : tail[i - 1];
  });
}

template <class T>
lazy_sequence<T> drop(lazy_sequence<T> s, std::size_t count) {
  return lazy_sequence<T>([s = std::move(s), count](std::size_t i) { return s[i + count]; });
}

template <class T, class F>
auto map_sequence(lazy_sequence<T> s, F f) -> lazy_sequence<decltype(f(std::declval<T>()))> {
  using U = decltype(f(std::declval<T>()));
  return lazy_sequence<U>([s = std::move(s), f = std::move(f)](std::size_t i) { return f(s[i]); });
}

}  // namespace searchreal
