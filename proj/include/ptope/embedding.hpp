#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ptope/autodiff.hpp"
#include "ptope/errors.hpp"
#include "ptope/interval.hpp"
#include "ptope/linalg.hpp"
#include "ptope/matrix.hpp"
#include "ptope/parametope.hpp"
#include "ptope/systems.hpp"

namespace ptope {

// Stacked state (center, alpha, offset) of the embedding ODE. For symmetric
// polytopes the offset is (-lower, upper) so every entry is the right-hand
// side of one "g_k <= y_k" constraint; ellipsoids carry the single level.
struct EmbeddingState {
  SetKind kind = SetKind::symmetric_polytope;
  std::vector<double> center;
  DenseMatrix alpha;
  std::vector<double> offset;

  std::size_t dim() const noexcept { return center.size(); }

  static EmbeddingState from_parametope(const Parametope& p) {
    EmbeddingState s{p.kind(), p.center(), p.alpha(), p.offset()};
    if (p.kind() == SetKind::symmetric_polytope) {
      for (std::size_t k = 0; k < p.dim(); ++k) s.offset[k] = -s.offset[k];
    }
    return s;
  }

  Parametope to_parametope() const {
    std::vector<double> off = offset;
    if (kind == SetKind::symmetric_polytope) {
      for (std::size_t k = 0; k < dim(); ++k) off[k] = -off[k];
    }
    return Parametope(kind, center, alpha, std::move(off));
  }

  std::size_t packed_size() const noexcept { return center.size() + alpha.data().size() + offset.size(); }

  std::vector<double> pack() const {
    std::vector<double> v;
    v.reserve(packed_size());
    v.insert(v.end(), center.begin(), center.end());
    v.insert(v.end(), alpha.data().begin(), alpha.data().end());
    v.insert(v.end(), offset.begin(), offset.end());
    return v;
  }

  // Same layout as `like`.
  static EmbeddingState unpack(const EmbeddingState& like, std::span<const double> v) {
    const std::size_t n = like.dim();
    if (v.size() != like.packed_size()) throw DimensionError("packed embedding state has wrong length");
    EmbeddingState s;
    s.kind = like.kind;
    s.center.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
    s.alpha = DenseMatrix::from_row_major(n, n, v.subspan(n, n * n));
    s.offset.assign(v.begin() + static_cast<std::ptrdiff_t>(n + n * n), v.end());
    return s;
  }
};

enum class OffsetBound { interval_facet, ellipsoid_eig };

// How the facet bracket U (x - c) + alpha (f(x) - f(c)) is enclosed.
//   direct      interval f over the facet box minus f(c), U term separately
//   mean_value  (U + alpha [Df(H)]) inv(alpha) z over the hull H of facet and center
//   intersect   the smaller of the two (both are sound)
enum class BracketForm { direct, mean_value, intersect };

struct BoundStrategy {
  OffsetBound variant = OffsetBound::interval_facet;
  JacobianMode jacobian_mode = JacobianMode::plain;
  std::vector<std::size_t> order;  // mixed-Jacobian coordinate order; empty means identity
  std::size_t corner_cap = 64;
  BracketForm bracket = BracketForm::intersect;
  // Linear systems: assemble (U + alpha A) before interval evaluation.
  bool linear_fast_path = true;
};

inline std::string to_string(OffsetBound v) {
  return v == OffsetBound::interval_facet ? "interval_facet" : "ellipsoid_eig";
}

// Rates observed inside one step (over all right-hand-side evaluations).
struct RateDiagnostics {
  double max_offset_rate = -std::numeric_limits<double>::infinity();
  double min_growth_rate = std::numeric_limits<double>::infinity();
  double max_growth_rate = -std::numeric_limits<double>::infinity();

  void merge(const RateDiagnostics& o) {
    max_offset_rate = std::max(max_offset_rate, o.max_offset_rate);
    min_growth_rate = std::min(min_growth_rate, o.min_growth_rate);
    max_growth_rate = std::max(max_growth_rate, o.max_growth_rate);
  }
};

// alpha' = -alpha Df(c): each row evolves under the adjoint of the linearization.
inline DenseMatrix adjoint_update(const DenseMatrix& alpha, const DenseMatrix& jac) { return -(alpha * jac); }

namespace detail {

inline std::vector<std::size_t> resolve_order(const BoundStrategy& st, std::size_t n) {
  return st.order.empty() ? identity_order(n) : st.order;
}

inline JacobianEnclosure enclose_jacobian(const DynamicalSystem& sys, const std::vector<double>& center,
                                          const IntervalVector& box, const BoundStrategy& st) {
  if (st.jacobian_mode == JacobianMode::mixed) {
    return jacobian_mixed(sys, center, box, resolve_order(st, center.size()));
  }
  return jacobian_interval(sys, box);
}

// Quantities shared by every facet bound of one state.
struct FacetBoundContext {
  const DynamicalSystem& sys;
  const BoundStrategy& strategy;
  Parametope set;
  IntervalMatrix alpha_inv;
  IntervalMatrix alpha;
  IntervalMatrix u;
  IntervalVector center_field;  // enclosure of f(c)
  IntervalVector disturbance;   // alpha C (W - w_center)

  FacetBoundContext(const DynamicalSystem& s, const EmbeddingState& st, const DenseMatrix& u_point,
                    const std::vector<double>& w_center, const BoundStrategy& strat)
      : sys(s),
        strategy(strat),
        set(st.to_parametope()),
        alpha_inv(inverse_enclosure(st.alpha)),
        alpha(to_intervals(st.alpha)),
        u(to_intervals(u_point)),
        center_field(s.drift(to_intervals(st.center))) {
    const std::size_t n = st.dim();
    disturbance = IntervalVector(n, Interval(0.0));
    if (s.disturbance_dim() > 0) {
      if (w_center.size() != s.disturbance_dim()) throw DimensionError("w_center has wrong dimension");
      const IntervalVector dw = s.disturbance_box() - to_intervals(w_center);
      disturbance = (alpha * to_intervals(s.input_matrix())) * dw;
    }
  }
};

inline Interval dot_row(const IntervalMatrix& m, std::size_t r, const IntervalVector& v) {
  Interval acc(0.0);
  for (std::size_t j = 0; j < m.cols(); ++j) acc += m(r, j) * v[j];
  return acc;
}

// Enclosure of row r of the bracket over facet k.
inline Interval facet_bracket(const FacetBoundContext& ctx, const FacetId& k) {
  const std::size_t r = k.coordinate;
  const IntervalVector z = z_box(ctx.set, &k);
  const auto& sys = ctx.sys;
  const auto& st = ctx.strategy;

  if (sys.is_linear() && st.linear_fast_path) {
    const IntervalMatrix b = ctx.u + ctx.alpha * to_intervals(sys.linear_part());
    return dot_row(b * ctx.alpha_inv, r, z);
  }

  const IntervalVector x_box = map_to_state(ctx.set, ctx.alpha_inv, z);
  Interval best = Interval::empty();

  if (st.bracket != BracketForm::mean_value) {
    const Interval u_term = dot_row(ctx.u * ctx.alpha_inv, r, z);
    const IntervalVector df = sys.drift(x_box) - ctx.center_field;
    best = u_term + dot_row(ctx.alpha, r, df);
  }
  if (st.bracket != BracketForm::direct) {
    const IntervalVector hull_box = hull(x_box, ctx.set.center());
    const JacobianEnclosure jac = enclose_jacobian(sys, ctx.set.center(), hull_box, st);
    const IntervalMatrix b = ctx.u + ctx.alpha * jac.matrix;
    const Interval mv = dot_row(b * ctx.alpha_inv, r, z);
    if (best.is_empty()) {
      best = mv;
    } else {
      // Both enclose the same quantity; keep the tighter side of each.
      best = Interval(std::max(best.lo(), mv.lo()), std::min(best.hi(), mv.hi()));
    }
  }
  return best;
}

inline double facet_bound(const FacetBoundContext& ctx, const FacetId& k) {
  const Interval bracket = facet_bracket(ctx, k) + ctx.disturbance[k.coordinate];
  return k.side == FacetSide::upper ? bracket.hi() : -bracket.lo();
}

}  // namespace detail

// Upper bound of xi_k over facet k of the symmetric polytope s and all w in W:
// the sup of +/- row k of U (x - c) + alpha (f(x) - f(c)) + alpha C (w - w_center).
inline double xi_facet_bound(const DynamicalSystem& sys, const EmbeddingState& s, const DenseMatrix& u,
                             const FacetId& k, const std::vector<double>& w_center,
                             const BoundStrategy& strategy = {}) {
  if (s.kind != SetKind::symmetric_polytope) throw Error("xi_facet_bound: requires a symmetric polytope");
  const detail::FacetBoundContext ctx(sys, s, u, w_center, strategy);
  return detail::facet_bound(ctx, k);
}

// c = max_i lambda_max(T_i + T_i^T), T_i = alpha (M_i - J) inv(alpha), over the
// corners M_i of the enclosure.
inline double growth_rate_from_enclosure(const JacobianEnclosure& enc, const DenseMatrix& alpha,
                                         const DenseMatrix& jac_center, std::size_t corner_cap) {
  const DenseMatrix alpha_inv = invert(alpha);
  double c = -std::numeric_limits<double>::infinity();
  for (const auto& corner : ldi_corners(enc, corner_cap)) {
    const DenseMatrix t = alpha * (corner - jac_center) * alpha_inv;
    c = std::max(c, lambda_max(t + transpose(t)));
  }
  return c;
}

inline void require_ellipsoid_strategy(const DynamicalSystem& sys) {
  for (const auto& w : sys.disturbance_box()) {
    if (w.width() > 0.0) throw Error("ellipsoid_eig strategy supports autonomous systems only (W must be a point)");
  }
}

// Growth rate c with y' = c y for an ellipsoid state: Df is enclosed over the
// box hull of the ellipsoid (plain or mixed) and the LDI corners enumerated.
inline double ellipsoid_growth_rate(const DynamicalSystem& sys, const EmbeddingState& s,
                                    const BoundStrategy& strategy) {
  if (s.kind != SetKind::ellipsoid) throw Error("ellipsoid_growth_rate: requires an ellipsoid state");
  require_ellipsoid_strategy(sys);
  const Parametope p = s.to_parametope();
  const IntervalVector hull_box = box_hull(p, inverse_enclosure(s.alpha));
  const JacobianEnclosure enc = detail::enclose_jacobian(sys, s.center, hull_box, strategy);
  return growth_rate_from_enclosure(enc, s.alpha, jacobian_point(sys, s.center), strategy.corner_cap);
}

inline void validate_strategy(const BoundStrategy& st, SetKind kind, std::size_t n) {
  if (st.variant == OffsetBound::ellipsoid_eig && kind != SetKind::ellipsoid) {
    throw Error("ellipsoid_eig strategy requires an ellipsoid set");
  }
  if (st.variant == OffsetBound::interval_facet && kind != SetKind::symmetric_polytope) {
    throw Error("interval_facet strategy requires a symmetric polytope set");
  }
  if (!st.order.empty() && !is_permutation_of_indices(st.order, n)) {
    throw Error("strategy order is not a permutation of the state indices");
  }
}

// Right-hand side of the embedding ODE:
//   c' = f(c, w_center), alpha' = -alpha Df(c), y' = E(c, alpha, y).
inline EmbeddingState embedding_rhs(const DynamicalSystem& sys, const EmbeddingState& s,
                                    const BoundStrategy& strategy, const std::vector<double>& w_center,
                                    RateDiagnostics* diag = nullptr) {
  validate_strategy(strategy, s.kind, s.dim());
  EmbeddingState d;
  d.kind = s.kind;
  d.center = sys.field(s.center, w_center);
  const DenseMatrix jac = jacobian_point(sys, s.center);
  d.alpha = adjoint_update(s.alpha, jac);

  RateDiagnostics local;
  if (strategy.variant == OffsetBound::ellipsoid_eig) {
    const double c = ellipsoid_growth_rate(sys, s, strategy);
    d.offset = {c * s.offset[0]};
    local.min_growth_rate = local.max_growth_rate = c;
    local.max_offset_rate = d.offset[0];
  } else {
    const detail::FacetBoundContext ctx(sys, s, d.alpha, w_center, strategy);
    const auto facets = ctx.set.facets();
    d.offset.resize(facets.size());
    // facets() lists lower faces first, matching the (-lower, upper) offset layout.
    for (std::size_t i = 0; i < facets.size(); ++i) {
      d.offset[i] = detail::facet_bound(ctx, facets[i]);
      local.max_offset_rate = std::max(local.max_offset_rate, d.offset[i]);
    }
  }
  if (diag) diag->merge(local);
  return d;
}

enum class Method { euler, rk4 };

inline std::string to_string(Method m) { return m == Method::euler ? "euler" : "rk4"; }

struct EmbeddingTrajectory {
  std::vector<double> times;
  std::vector<EmbeddingState> states;
  std::vector<RateDiagnostics> diagnostics;  // one per step
  Method method = Method::rk4;
  double step = 0.0;
  BoundStrategy strategy;
};

// Fixed-step integration of the embedding ODE. Not validated: the truncation
// error of the scheme itself is not enclosed.
inline EmbeddingTrajectory integrate(const DynamicalSystem& sys, const EmbeddingState& s0,
                                     const BoundStrategy& strategy, double t0, double tf, std::size_t steps,
                                     Method method, std::vector<double> w_center = {}) {
  if (!(tf > t0)) throw Error("integrate: tf must exceed t0");
  if (steps < 1) throw Error("integrate: steps must be at least 1");
  if (s0.dim() != sys.dim()) throw DimensionError("integrate: initial state dimension differs from system");
  validate_strategy(strategy, s0.kind, s0.dim());
  if (w_center.empty()) w_center = sys.nominal_disturbance();

  const double h = (tf - t0) / static_cast<double>(steps);
  EmbeddingTrajectory traj;
  traj.method = method;
  traj.step = h;
  traj.strategy = strategy;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.diagnostics.reserve(steps);
  traj.times.push_back(t0);
  traj.states.push_back(s0);

  auto rhs = [&](const std::vector<double>& packed, RateDiagnostics& diag) {
    const EmbeddingState s = EmbeddingState::unpack(s0, packed);
    return embedding_rhs(sys, s, strategy, w_center, &diag).pack();
  };
  auto axpy = [](const std::vector<double>& x, double a, const std::vector<double>& d) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * d[i];
    return out;
  };

  std::vector<double> x = s0.pack();
  for (std::size_t step = 0; step < steps; ++step) {
    RateDiagnostics diag;
    try {
      if (method == Method::euler) {
        x = axpy(x, h, rhs(x, diag));
      } else {
        const auto k1 = rhs(x, diag);
        const auto k2 = rhs(axpy(x, 0.5 * h, k1), diag);
        const auto k3 = rhs(axpy(x, 0.5 * h, k2), diag);
        const auto k4 = rhs(axpy(x, h, k3), diag);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    } catch (const IntegrationError&) {
      throw;
    } catch (const Error& e) {
      throw IntegrationError(step, e.what());
    }
    if (!all_finite(x)) throw IntegrationError(step, "non-finite embedding state");
    EmbeddingState next = EmbeddingState::unpack(s0, x);
    try {
      (void)invert(next.alpha);
    } catch (const SingularMatrixError& e) {
      throw IntegrationError(step, std::string("alpha became singular: ") + e.what());
    }
    traj.times.push_back(step + 1 == steps ? tf : t0 + static_cast<double>(step + 1) * h);
    traj.states.push_back(std::move(next));
    traj.diagnostics.push_back(diag);
  }
  return traj;
}

}  // namespace ptope
