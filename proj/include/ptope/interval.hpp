#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "ptope/errors.hpp"

namespace ptope {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double next_down(double v) { return std::nextafter(v, -kInf); }
inline double next_up(double v) { return std::nextafter(v, kInf); }

// Directed rounding without touching the FPU mode. Each routine computes the
// round-to-nearest result and its exact error term (TwoSum / FMA), then steps
// one ULP only when the error points outward. Exact operations stay exact.
struct Rounded {
  double down;
  double up;
};

// A finite operation that overflowed: the exact value is still finite, so the
// inner bound is the largest double of the same sign.
inline Rounded overflowed(double r) {
  constexpr double big = std::numeric_limits<double>::max();
  return r > 0 ? Rounded{big, r} : Rounded{r, -big};
}

inline Rounded add_rounded(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return std::isfinite(a) && std::isfinite(b) && !std::isnan(s) ? overflowed(s) : Rounded{s, s};
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {err < 0 ? next_down(s) : s, err > 0 ? next_up(s) : s};
}

inline Rounded mul_rounded(double a, double b) {
  // 0 * inf is 0 here: an infinite endpoint only stands for "unbounded".
  if (a == 0.0 || b == 0.0) return {0.0, 0.0};
  const double p = a * b;
  if (!std::isfinite(p)) return std::isfinite(a) && std::isfinite(b) ? overflowed(p) : Rounded{p, p};
  // FMA error term is only exact away from the underflow range.
  if (std::fabs(p) < 0x1p-968) return {next_down(p), next_up(p)};
  const double err = std::fma(a, b, -p);
  return {err < 0 ? next_down(p) : p, err > 0 ? next_up(p) : p};
}

inline Rounded recip_rounded(double b) {
  const double r = 1.0 / b;
  if (!std::isfinite(r) || std::fabs(r) < 0x1p-968 || std::fabs(b) < 0x1p-968) {
    return {next_down(r), next_up(r)};
  }
  // r*b - 1 is exactly representable when r is the rounded reciprocal.
  const double residual = std::fma(r, b, -1.0);
  const double sign = residual * (b > 0 ? 1.0 : -1.0);  // sign of r - 1/b
  return {sign > 0 ? next_down(r) : r, sign < 0 ? next_up(r) : r};
}

}  // namespace detail

// Closed real interval [lo, hi] with outward-rounded arithmetic. The empty set
// is a separate state produced by Interval::empty(); every operation on an
// empty operand returns empty.
class Interval {
 public:
  constexpr Interval() noexcept : lo_(0.0), hi_(0.0) {}
  // Implicit so that plain doubles mix with intervals in formulas.
  constexpr Interval(double v) noexcept : lo_(v), hi_(v) {}  // NOLINT
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw Error("interval requires lo <= hi");
  }

  static Interval empty() noexcept {
    Interval r;
    r.empty_ = true;
    return r;
  }
  static Interval symmetric(double radius) { return {-radius, radius}; }
  static Interval hull(double a, double b) { return a <= b ? Interval(a, b) : Interval(b, a); }

  bool is_empty() const noexcept { return empty_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double inf() const noexcept { return lo_; }
  double sup() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept {
    const double m = 0.5 * (lo_ + hi_);
    return std::isfinite(m) ? m : 0.5 * lo_ + 0.5 * hi_;
  }
  double mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  bool is_point() const noexcept { return !empty_ && lo_ == hi_; }

  bool contains(double v) const noexcept { return !empty_ && lo_ <= v && v <= hi_; }
  bool contains(const Interval& o) const noexcept {
    if (o.empty_) return true;
    return !empty_ && lo_ <= o.lo_ && o.hi_ <= hi_;
  }

  friend bool operator==(const Interval& a, const Interval& b) noexcept {
    if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  double lo_;
  double hi_;
  bool empty_ = false;
};

inline Interval operator-(const Interval& a) {
  if (a.is_empty()) return a;
  return {-a.hi(), -a.lo()};
}

inline Interval operator+(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  return {detail::add_rounded(a.lo(), b.lo()).down, detail::add_rounded(a.hi(), b.hi()).up};
}

inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

inline Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = detail::kInf;
  double hi = -detail::kInf;
  for (double x : xs) {
    for (double y : ys) {
      const auto p = detail::mul_rounded(x, y);
      lo = std::min(lo, p.down);
      hi = std::max(hi, p.up);
    }
  }
  return {lo, hi};
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

// x^2 with the even-power rule: the result never dips below zero.
inline Interval sqr(const Interval& a) {
  if (a.is_empty()) return a;
  if (a.lo() >= 0) return {detail::mul_rounded(a.lo(), a.lo()).down, detail::mul_rounded(a.hi(), a.hi()).up};
  if (a.hi() <= 0) return {detail::mul_rounded(a.hi(), a.hi()).down, detail::mul_rounded(a.lo(), a.lo()).up};
  const double m = a.mag();
  return {0.0, detail::mul_rounded(m, m).up};
}

// 1/a for intervals not containing zero; the benchmark dynamics need it for
// rational terms whose denominators are bounded away from zero.
inline Interval recip(const Interval& a) {
  if (a.is_empty()) return a;
  if (a.contains(0.0)) throw Error("interval reciprocal of an interval containing zero");
  return {detail::recip_rounded(a.hi()).down, detail::recip_rounded(a.lo()).up};
}

inline Interval operator/(const Interval& a, const Interval& b) { return a * recip(b); }

inline Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return Interval::empty();
  return {lo, hi};
}

inline double sqr(double v) { return v * v; }
inline double recip(double v) { return 1.0 / v; }

inline std::ostream& operator<<(std::ostream& os, const Interval& a) {
  if (a.is_empty()) return os << "[empty]";
  return os << '[' << a.lo() << ", " << a.hi() << ']';
}

using IntervalVector = std::vector<Interval>;

inline IntervalVector to_intervals(const std::vector<double>& v) { return {v.begin(), v.end()}; }

inline std::vector<double> midpoints(const IntervalVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.midpoint());
  return out;
}

inline bool contains(const IntervalVector& box, const std::vector<double>& x) {
  if (box.size() != x.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!box[i].contains(x[i])) return false;
  }
  return true;
}

inline IntervalVector hull(const IntervalVector& a, const std::vector<double>& p) {
  if (a.size() != p.size()) throw DimensionError("hull: dimension mismatch");
  IntervalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = hull(a[i], Interval(p[i]));
  return out;
}

}  // namespace ptope
