#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ptope/errors.hpp"
#include "ptope/interval.hpp"
#include "ptope/linalg.hpp"
#include "ptope/matrix.hpp"

namespace ptope {

enum class SetKind { symmetric_polytope, ellipsoid };

inline std::string to_string(SetKind k) {
  return k == SetKind::symmetric_polytope ? "symmetric_polytope" : "ellipsoid";
}

enum class FacetSide { lower, upper };

// Symmetric polytope: (coordinate, side) of the constraint row. Ellipsoid: the
// single boundary, coordinate 0 / upper.
struct FacetId {
  std::size_t coordinate = 0;
  FacetSide side = FacetSide::upper;

  friend bool operator==(const FacetId&, const FacetId&) = default;
};

// {x : lower <= alpha (x - center) <= upper}      (symmetric polytope)
// {x : (x - center)^T alpha^T alpha (x - center) <= level}   (ellipsoid)
// alpha is square and invertible in both cases.
class Parametope {
 public:
  static Parametope symmetric_polytope(std::vector<double> center, DenseMatrix alpha, const std::vector<double>& lower,
                                       const std::vector<double>& upper) {
    if (lower.size() != upper.size()) throw DimensionError("polytope bounds differ in length");
    std::vector<double> offset(lower);
    offset.insert(offset.end(), upper.begin(), upper.end());
    return Parametope(SetKind::symmetric_polytope, std::move(center), std::move(alpha), std::move(offset));
  }

  static Parametope ellipsoid(std::vector<double> center, DenseMatrix alpha, double level) {
    return Parametope(SetKind::ellipsoid, std::move(center), std::move(alpha), {level});
  }

  // offset layout: polytope (lower..., upper...), ellipsoid (level).
  Parametope(SetKind kind, std::vector<double> center, DenseMatrix alpha, std::vector<double> offset)
      : kind_(kind), center_(std::move(center)), alpha_(std::move(alpha)), offset_(std::move(offset)) {
    validate();
  }

  SetKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return center_.size(); }
  const std::vector<double>& center() const noexcept { return center_; }
  const DenseMatrix& alpha() const noexcept { return alpha_; }
  const std::vector<double>& offset() const noexcept { return offset_; }

  std::vector<double> lower() const { return {offset_.begin(), offset_.begin() + static_cast<std::ptrdiff_t>(dim())}; }
  std::vector<double> upper() const { return {offset_.begin() + static_cast<std::ptrdiff_t>(dim()), offset_.end()}; }
  double level() const { return offset_.front(); }

  std::vector<FacetId> facets() const {
    if (kind_ == SetKind::ellipsoid) return {FacetId{}};
    std::vector<FacetId> out;
    for (std::size_t k = 0; k < dim(); ++k) out.push_back({k, FacetSide::lower});
    for (std::size_t k = 0; k < dim(); ++k) out.push_back({k, FacetSide::upper});
    return out;
  }

 private:
  void validate() const {
    const std::size_t n = center_.size();
    if (n == 0) throw DimensionError("parametope: empty center");
    if (alpha_.rows() != n || alpha_.cols() != n) throw DimensionError("parametope: alpha must be n x n");
    if (!all_finite(center_) || !all_finite(alpha_) || !all_finite(offset_)) {
      throw Error("parametope: non-finite entries");
    }
    if (kind_ == SetKind::symmetric_polytope) {
      if (offset_.size() != 2 * n) throw DimensionError("symmetric polytope offset must have 2n entries");
      for (std::size_t k = 0; k < n; ++k) {
        if (offset_[k] > offset_[n + k]) throw Error("symmetric polytope requires lower <= upper");
      }
    } else {
      if (offset_.size() != 1) throw DimensionError("ellipsoid offset must be a single level");
      if (offset_[0] < 0) throw Error("ellipsoid level must be non-negative");
    }
  }

  SetKind kind_;
  std::vector<double> center_;
  DenseMatrix alpha_;
  std::vector<double> offset_;
};

// Exact comparison unless the caller passes a slack.
inline bool contains(const Parametope& p, const std::vector<double>& x, double slack = 0.0) {
  if (x.size() != p.dim()) throw DimensionError("contains: dimension mismatch");
  const auto z = p.alpha() * (x - p.center());
  if (p.kind() == SetKind::ellipsoid) return dot(z, z) <= p.level() + slack;
  const std::size_t n = p.dim();
  for (std::size_t k = 0; k < n; ++k) {
    if (z[k] < p.offset()[k] - slack || z[k] > p.offset()[n + k] + slack) return false;
  }
  return true;
}

// Box of z = alpha (x - center) coordinates covering facet k (or the whole set
// when `facet` is null).
inline IntervalVector z_box(const Parametope& p, const FacetId* facet) {
  const std::size_t n = p.dim();
  if (p.kind() == SetKind::ellipsoid) {
    const double r = detail::next_up(std::sqrt(p.level()));
    return IntervalVector(n, Interval::symmetric(r));
  }
  IntervalVector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = Interval(p.offset()[i], p.offset()[n + i]);
  if (facet) {
    if (facet->coordinate >= n) throw Error("facet index out of range");
    const double face = facet->side == FacetSide::lower ? p.offset()[facet->coordinate]
                                                        : p.offset()[n + facet->coordinate];
    z[facet->coordinate] = Interval(face);
  }
  return z;
}

// center + inv(alpha) Z in interval arithmetic, using an enclosure of the
// exact inverse.
inline IntervalVector map_to_state(const Parametope& p, const IntervalMatrix& alpha_inv, const IntervalVector& z) {
  return to_intervals(p.center()) + alpha_inv * z;
}

inline IntervalVector facet_enclosure(const Parametope& p, const FacetId& k, const IntervalMatrix& alpha_inv) {
  if (p.kind() == SetKind::ellipsoid && !(k == FacetId{})) throw Error("ellipsoid has a single facet");
  return map_to_state(p, alpha_inv, z_box(p, &k));
}

inline IntervalVector facet_enclosure(const Parametope& p, const FacetId& k) {
  return facet_enclosure(p, k, inverse_enclosure(p.alpha()));
}

inline IntervalVector box_hull(const Parametope& p, const IntervalMatrix& alpha_inv) {
  return map_to_state(p, alpha_inv, z_box(p, nullptr));
}

inline IntervalVector box_hull(const Parametope& p) { return box_hull(p, inverse_enclosure(p.alpha())); }

// The 2^n points center + inv(alpha) z over corners z of [lower, upper]; bit i
// of the corner index selects upper for coordinate i.
inline std::vector<std::vector<double>> vertices(const Parametope& p) {
  if (p.kind() != SetKind::symmetric_polytope) throw Error("vertices: only defined for symmetric polytopes");
  const std::size_t n = p.dim();
  const DenseMatrix inv = invert(p.alpha());
  std::vector<std::vector<double>> out;
  out.reserve(std::size_t{1} << n);
  std::vector<double> z(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) z[i] = (mask >> i) & 1U ? p.offset()[n + i] : p.offset()[i];
    out.push_back(p.center() + inv * z);
  }
  return out;
}

inline std::vector<double> random_unit_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(n);
  double len = 0.0;
  while (len == 0.0) {
    for (auto& v : u) v = normal(rng);
    len = norm2(u);
  }
  for (auto& v : u) v /= len;
  return u;
}

inline std::vector<std::vector<double>> boundary_samples(const Parametope& p, std::size_t count, std::uint64_t seed) {
  if (p.kind() != SetKind::ellipsoid) throw Error("boundary_samples: only defined for ellipsoids");
  const std::size_t n = p.dim();
  const DenseMatrix inv = invert(p.alpha());
  const double r = std::sqrt(p.level());
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    auto u = random_unit_vector(n, rng);
    for (auto& v : u) v *= r;
    out.push_back(p.center() + inv * u);
  }
  return out;
}

// Uniform sample: uniform z in the polytope box or in the ball of radius
// sqrt(level), mapped through inv(alpha).
inline std::vector<double> sample_uniform(const Parametope& p, const DenseMatrix& alpha_inv, std::mt19937_64& rng) {
  const std::size_t n = p.dim();
  std::vector<double> z(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (p.kind() == SetKind::symmetric_polytope) {
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = p.offset()[i];
      const double hi = p.offset()[n + i];
      z[i] = std::min(hi, lo + (hi - lo) * unit(rng));
    }
  } else {
    z = random_unit_vector(n, rng);
    const double radius = std::sqrt(p.level()) * std::pow(unit(rng), 1.0 / static_cast<double>(n));
    for (auto& v : z) v *= radius;
  }
  return p.center() + alpha_inv * z;
}

}  // namespace ptope
