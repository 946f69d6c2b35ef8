#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ptope/dual.hpp"
#include "ptope/errors.hpp"
#include "ptope/interval.hpp"
#include "ptope/matrix.hpp"

namespace ptope {

enum class JacobianMode { plain, mixed };

// Interval matrix enclosing Df over `domain`. For mode == mixed the enclosure
// only supports the mean-value containment f(x) - f(c) in M (x - c) around the
// center it was built from, not pointwise Df containment.
struct JacobianEnclosure {
  IntervalMatrix matrix;
  IntervalVector domain;
  JacobianMode mode = JacobianMode::plain;
};

namespace detail {

template <class S, class System>
std::vector<Dual<S>> seeded_eval(const System& sys, const std::vector<S>& x) {
  const std::size_t n = x.size();
  std::vector<Dual<S>> in;
  in.reserve(n);
  for (std::size_t i = 0; i < n; ++i) in.push_back(Dual<S>::variable(x[i], i, n));
  return sys.template drift<Dual<S>>(in);
}

template <class S>
S partial(const Dual<S>& y, std::size_t j) {
  return j < y.deriv.size() ? y.deriv[j] : S(0.0);
}

}  // namespace detail

// Df(x) from one forward pass with all n inputs seeded.
template <class System>
DenseMatrix jacobian_point(const System& sys, const std::vector<double>& x) {
  const auto out = detail::seeded_eval<double>(sys, x);
  DenseMatrix jac(out.size(), x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      jac(i, j) = detail::partial(out[i], j);
      if (!std::isfinite(jac(i, j))) throw Error("jacobian_point: non-finite derivative (invalid state)");
    }
  }
  return jac;
}

template <class System>
JacobianEnclosure jacobian_interval(const System& sys, const IntervalVector& box) {
  for (const auto& b : box) {
    if (b.is_empty()) throw Error("jacobian_interval: empty box");
  }
  const auto out = detail::seeded_eval<Interval>(sys, box);
  IntervalMatrix m(out.size(), box.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < box.size(); ++j) m(i, j) = detail::partial(out[i], j);
  return {std::move(m), box, JacobianMode::plain};
}

inline bool is_permutation_of_indices(const std::vector<std::size_t>& order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto i : order) {
    if (i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

// Mixed Jacobian. Column order[p] is evaluated with coordinates order[0..p)
// pinned to the center and order[p..n) ranging over the box. This is the
// mean-value path that moves coordinates from the center to x in reverse
// order, so f(x) - f(center) = M (x - center) for some M in the enclosure.
template <class System>
JacobianEnclosure jacobian_mixed(const System& sys, const std::vector<double>& center, const IntervalVector& box,
                                 const std::vector<std::size_t>& order) {
  const std::size_t n = box.size();
  if (center.size() != n) throw DimensionError("jacobian_mixed: center and box dimensions differ");
  if (!is_permutation_of_indices(order, n)) throw Error("jacobian_mixed: order is not a permutation of 0..n-1");
  if (!contains(box, center)) throw Error("jacobian_mixed: center lies outside the box");

  IntervalMatrix m(n, n);
  IntervalVector point = box;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t col = order[p];
    const auto out = detail::seeded_eval<Interval>(sys, point);
    for (std::size_t i = 0; i < out.size(); ++i) m(i, col) = detail::partial(out[i], col);
    point[col] = Interval(center[col]);
  }
  return {std::move(m), box, JacobianMode::mixed};
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

inline std::size_t count_nondegenerate(const IntervalMatrix& m) {
  std::size_t k = 0;
  for (const auto& e : m.data()) k += e.width() > 0.0 ? 1 : 0;
  return k;
}

// All 2^k matrices taking lo/hi of each of the k non-degenerate entries; their
// convex hull contains the interval matrix set.
inline std::vector<DenseMatrix> ldi_corners(const JacobianEnclosure& enc, std::size_t corner_cap) {
  const IntervalMatrix& m = enc.matrix;
  std::vector<std::size_t> free_entries;
  DenseMatrix base(m.rows(), m.cols());
  for (std::size_t idx = 0; idx < m.data().size(); ++idx) {
    const Interval& e = m.data()[idx];
    if (e.width() > 0.0) free_entries.push_back(idx);
    base.data()[idx] = e.lo();
  }
  const std::size_t k = free_entries.size();
  if (k >= 63 || (std::uint64_t{1} << k) > corner_cap) throw CornerCapError(k, corner_cap);

  const std::uint64_t count = std::uint64_t{1} << k;
  std::vector<DenseMatrix> corners;
  corners.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    DenseMatrix c = base;
    for (std::size_t b = 0; b < k; ++b) {
      if (mask & (std::uint64_t{1} << b)) c.data()[free_entries[b]] = m.data()[free_entries[b]].hi();
    }
    corners.push_back(std::move(c));
  }
  return corners;
}

}  // namespace ptope
