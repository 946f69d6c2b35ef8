#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ptope/interval.hpp"

namespace ptope {

// Forward-mode dual number over scalar S (double or Interval). `deriv` holds
// the partials with respect to every seeded input of one evaluation pass.
template <class S>
struct Dual {
  S value{};
  std::vector<S> deriv;

  Dual() = default;
  Dual(S v) : value(std::move(v)) {}  // NOLINT: constants inside formulas
  Dual(S v, std::vector<S> d) : value(std::move(v)), deriv(std::move(d)) {}

  static Dual variable(S v, std::size_t index, std::size_t n) {
    std::vector<S> d(n, S(0.0));
    d[index] = S(1.0);
    return {std::move(v), std::move(d)};
  }
  static Dual constant(S v, std::size_t n) { return {std::move(v), std::vector<S>(n, S(0.0))}; }
};

namespace detail {

// Constants built from doubles carry no derivative vector; treat them as zero.
template <class S, class F>
std::vector<S> combine(const std::vector<S>& a, const std::vector<S>& b, F f) {
  const std::size_t n = a.size() > b.size() ? a.size() : b.size();
  std::vector<S> out(n);
  const S zero(0.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i < a.size() ? a[i] : zero, i < b.size() ? b[i] : zero);
  return out;
}

template <class S, class F>
std::vector<S> map(const std::vector<S>& a, F f) {
  std::vector<S> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

}  // namespace detail

template <class S>
Dual<S> operator+(const Dual<S>& a, const Dual<S>& b) {
  return {a.value + b.value, detail::combine(a.deriv, b.deriv, [](const S& x, const S& y) { return x + y; })};
}

template <class S>
Dual<S> operator-(const Dual<S>& a, const Dual<S>& b) {
  return {a.value - b.value, detail::combine(a.deriv, b.deriv, [](const S& x, const S& y) { return x - y; })};
}

template <class S>
Dual<S> operator-(const Dual<S>& a) {
  return {-a.value, detail::map(a.deriv, [](const S& x) { return -x; })};
}

template <class S>
Dual<S> operator*(const Dual<S>& a, const Dual<S>& b) {
  return {a.value * b.value,
          detail::combine(a.deriv, b.deriv, [&](const S& da, const S& db) { return da * b.value + a.value * db; })};
}

// 1/b, with d(1/b) = -db / b^2.
template <class S>
Dual<S> recip(const Dual<S>& b) {
  const S r = recip(b.value);
  const S minus_r2 = -(r * r);
  return {r, detail::map(b.deriv, [&](const S& db) { return minus_r2 * db; })};
}

template <class S>
Dual<S> operator/(const Dual<S>& a, const Dual<S>& b) {
  return a * recip(b);
}

template <class S>
Dual<S> sqr(const Dual<S>& a) {
  const S two_v = S(2.0) * a.value;
  return {sqr(a.value), detail::map(a.deriv, [&](const S& d) { return two_v * d; })};
}

template <class S>
Dual<S> operator+(double c, const Dual<S>& a) { return Dual<S>(S(c)) + a; }
template <class S>
Dual<S> operator+(const Dual<S>& a, double c) { return a + Dual<S>(S(c)); }
template <class S>
Dual<S> operator-(double c, const Dual<S>& a) { return Dual<S>(S(c)) - a; }
template <class S>
Dual<S> operator-(const Dual<S>& a, double c) { return a - Dual<S>(S(c)); }
template <class S>
Dual<S> operator*(double c, const Dual<S>& a) { return Dual<S>(S(c)) * a; }
template <class S>
Dual<S> operator*(const Dual<S>& a, double c) { return a * Dual<S>(S(c)); }
template <class S>
Dual<S> operator/(const Dual<S>& a, double c) { return a * Dual<S>(recip(S(c))); }
template <class S>
Dual<S> operator/(double c, const Dual<S>& a) { return Dual<S>(S(c)) / a; }

}  // namespace ptope
