#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ptope/embedding.hpp"
#include "ptope/parametope.hpp"
#include "ptope/systems.hpp"

namespace ptope {

struct Violation {
  std::size_t sample = 0;
  std::size_t time_index = 0;
  double time = 0.0;
  FacetId facet;
  double excess = 0.0;  // constraint value minus offset
};

struct VerificationReport {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  // Largest constraint value minus offset seen; negative means every sample
  // stayed strictly inside.
  double max_excess = -std::numeric_limits<double>::infinity();
  std::vector<Violation> first_violations;  // at most max_recorded entries
};

struct VerifyOptions {
  double slack = 1e-7;
  std::size_t refinement = 10;  // reference RK4 substeps per embedding step
  std::size_t max_recorded = 20;
};

// Largest constraint excess of x against parametope p, and the facet it
// belongs to.
inline std::pair<double, FacetId> worst_constraint(const Parametope& p, const std::vector<double>& x) {
  const auto z = p.alpha() * (x - p.center());
  if (p.kind() == SetKind::ellipsoid) return {dot(z, z) - p.level(), FacetId{}};
  const std::size_t n = p.dim();
  double worst = -std::numeric_limits<double>::infinity();
  FacetId which;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo_excess = p.offset()[k] - z[k];
    const double hi_excess = z[k] - p.offset()[n + k];
    if (lo_excess > worst) {
      worst = lo_excess;
      which = {k, FacetSide::lower};
    }
    if (hi_excess > worst) {
      worst = hi_excess;
      which = {k, FacetSide::upper};
    }
  }
  return {worst, which};
}

// Samples initial points uniformly in `initial`, integrates each with RK4 at
// `refinement` times the trajectory resolution (disturbance piecewise constant
// per substep, drawn uniformly from W) and checks containment at every stored
// time. Each sample has its own generator seeded from (seed, index), so the
// report is deterministic and independent of evaluation order.
inline VerificationReport verify_containment(const DynamicalSystem& sys, const EmbeddingTrajectory& traj,
                                             const Parametope& initial, std::size_t samples, std::uint64_t seed,
                                             const VerifyOptions& opt = {}) {
  VerificationReport report;
  report.samples = samples;
  if (samples == 0 || traj.states.empty()) return report;

  std::vector<Parametope> sets;
  sets.reserve(traj.states.size());
  for (const auto& s : traj.states) sets.push_back(s.to_parametope());

  const DenseMatrix initial_inv = invert(initial.alpha());
  const auto& wbox = sys.disturbance_box();
  const std::size_t refinement = std::max<std::size_t>(1, opt.refinement);

  for (std::size_t i = 0; i < samples; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw_w = [&] {
      std::vector<double> w(wbox.size());
      for (std::size_t j = 0; j < wbox.size(); ++j) {
        w[j] = std::min(wbox[j].hi(), wbox[j].lo() + wbox[j].width() * unit(rng));
      }
      return w;
    };

    std::vector<double> x = sample_uniform(initial, initial_inv, rng);
    for (std::size_t ti = 0; ti < traj.times.size(); ++ti) {
      if (ti > 0) {
        const double h = (traj.times[ti] - traj.times[ti - 1]) / static_cast<double>(refinement);
        for (std::size_t sub = 0; sub < refinement; ++sub) {
          const auto w = draw_w();
          const auto k1 = sys.field(x, w);
          std::vector<double> tmp(x.size());
          for (std::size_t j = 0; j < x.size(); ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
          const auto k2 = sys.field(tmp, w);
          for (std::size_t j = 0; j < x.size(); ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
          const auto k3 = sys.field(tmp, w);
          for (std::size_t j = 0; j < x.size(); ++j) tmp[j] = x[j] + h * k3[j];
          const auto k4 = sys.field(tmp, w);
          for (std::size_t j = 0; j < x.size(); ++j) x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
      }
      const auto [excess, facet] = worst_constraint(sets[ti], x);
      ++report.checks;
      report.max_excess = std::max(report.max_excess, excess);
      if (!(excess <= opt.slack)) {
        ++report.violations;
        if (report.first_violations.size() < opt.max_recorded) {
          report.first_violations.push_back({i, ti, traj.times[ti], facet, excess});
        }
      }
    }
  }
  return report;
}

// Negative-control helper: multiply every offset by `factor`.
inline EmbeddingTrajectory scale_offsets(EmbeddingTrajectory traj, double factor) {
  for (auto& s : traj.states) {
    for (auto& y : s.offset) y *= factor;
  }
  return traj;
}

}  // namespace ptope
