#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ptope/embedding.hpp"
#include "ptope/errors.hpp"
#include "ptope/io.hpp"
#include "ptope/parametope.hpp"
#include "ptope/systems.hpp"
#include "ptope/verify.hpp"

namespace ptope {

// One self-describing experiment:
// {system: {id, params}, initial: <parametope>, strategy: {variant,
//  jacobian_mode, corner_cap, order, bracket}, integrate: {method, t0, tf |
//  tf_over_pi, steps}, verify: {samples, seed}, output: {dir}}
struct ExperimentConfig {
  std::string id;
  DynamicalSystem system;
  Parametope initial;
  BoundStrategy strategy;
  Method method = Method::rk4;
  double t0 = 0.0;
  double tf = 1.0;
  std::size_t steps = 1;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
};

namespace detail {

inline DynamicalSystem parse_system(const json& j) {
  const auto& id_j = require(j, "id", "system.");
  if (!id_j.is_string()) throw ConfigError("system.id", "must be a string");
  const std::string id = id_j.get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) throw ConfigError("system.params", "must be an object");

  if (id == "vanderpol") {
    const double mu = params.contains("mu") ? as_number(params.at("mu"), "system.params.mu") : 0.25;
    if (!std::isfinite(mu)) throw ConfigError("system.params.mu", "must be finite");
    return vanderpol(mu);
  }
  if (id == "robot_arm") return robot_arm();
  if (id == "linear") {
    const auto a = as_numbers(require(params, "A", "system.params."), "system.params.A");
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a.size()))));
    if (n == 0 || n * n != a.size()) throw ConfigError("system.params.A", "must be a non-empty square row-major matrix");
    IntervalVector w;
    if (params.contains("W")) {
      const auto& wj = params.at("W");
      if (!wj.is_array()) throw ConfigError("system.params.W", "must be an array of [lo, hi] pairs");
      for (std::size_t i = 0; i < wj.size(); ++i) {
        const std::string p = "system.params.W[" + std::to_string(i) + "]";
        const auto pair = as_numbers(wj[i], p);
        if (pair.size() != 2 || !(pair[0] <= pair[1])) throw ConfigError(p, "must be [lo, hi] with lo <= hi");
        w.emplace_back(pair[0], pair[1]);
      }
    }
    DenseMatrix c(n, w.size());
    if (params.contains("C")) {
      const auto cv = as_numbers(params.at("C"), "system.params.C");
      if (cv.size() != n * w.size()) {
        throw ConfigError("system.params.C", "must hold n * len(W) = " + std::to_string(n * w.size()) + " entries");
      }
      c = DenseMatrix::from_row_major(n, w.size(), cv);
    } else if (!w.empty()) {
      throw ConfigError("system.params.C", "required when W is given");
    }
    return linear_system(DenseMatrix::from_row_major(n, n, a), std::move(c), std::move(w));
  }
  throw ConfigError("system.id", "unknown system '" + id + "' (expected vanderpol, robot_arm or linear)");
}

inline BoundStrategy parse_strategy(const json& j, std::size_t n) {
  BoundStrategy st;
  if (!j.is_object()) throw ConfigError("strategy", "must be an object");
  const auto& v = require(j, "variant", "strategy.");
  if (v == "interval_facet") {
    st.variant = OffsetBound::interval_facet;
  } else if (v == "ellipsoid_eig") {
    st.variant = OffsetBound::ellipsoid_eig;
  } else {
    throw ConfigError("strategy.variant", "expected interval_facet or ellipsoid_eig");
  }
  if (j.contains("jacobian_mode")) {
    const auto& m = j.at("jacobian_mode");
    if (m == "plain") {
      st.jacobian_mode = JacobianMode::plain;
    } else if (m == "mixed") {
      st.jacobian_mode = JacobianMode::mixed;
    } else {
      throw ConfigError("strategy.jacobian_mode", "expected plain or mixed");
    }
  }
  if (j.contains("corner_cap")) {
    st.corner_cap = as_count(j.at("corner_cap"), "strategy.corner_cap");
    if (st.corner_cap == 0) throw ConfigError("strategy.corner_cap", "must be at least 1");
  }
  if (j.contains("order")) {
    const auto& o = j.at("order");
    if (!o.is_array()) throw ConfigError("strategy.order", "must be an array of state indices");
    for (std::size_t i = 0; i < o.size(); ++i) st.order.push_back(as_count(o[i], "strategy.order"));
    if (!is_permutation_of_indices(st.order, n)) throw ConfigError("strategy.order", "must be a permutation of 0..n-1");
  }
  if (j.contains("bracket")) {
    const auto& b = j.at("bracket");
    if (b == "direct") {
      st.bracket = BracketForm::direct;
    } else if (b == "mean_value") {
      st.bracket = BracketForm::mean_value;
    } else if (b == "intersect") {
      st.bracket = BracketForm::intersect;
    } else {
      throw ConfigError("strategy.bracket", "expected direct, mean_value or intersect");
    }
  }
  return st;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& root) {
  using namespace detail;
  if (!root.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  DynamicalSystem sys = parse_system(require(root, "system", ""));
  Parametope initial = parametope_from_json(require(root, "initial", ""), "initial.");
  if (initial.dim() != sys.dim()) {
    throw ConfigError("initial.center", "dimension " + std::to_string(initial.dim()) + " does not match system dimension " +
                                            std::to_string(sys.dim()));
  }
  ExperimentConfig cfg{sys.name(), std::move(sys), std::move(initial), {}};
  if (root.contains("id")) {
    if (!root.at("id").is_string()) throw ConfigError("id", "must be a string");
    cfg.id = root.at("id").get<std::string>();
  }
  cfg.strategy = parse_strategy(require(root, "strategy", ""), cfg.initial.dim());
  try {
    validate_strategy(cfg.strategy, cfg.initial.kind(), cfg.initial.dim());
    if (cfg.strategy.variant == OffsetBound::ellipsoid_eig) require_ellipsoid_strategy(cfg.system);
  } catch (const Error& e) {
    throw ConfigError("strategy.variant", e.what());
  }

  const auto& integ = require(root, "integrate", "");
  const auto& method = require(integ, "method", "integrate.");
  if (method == "rk4") {
    cfg.method = Method::rk4;
  } else if (method == "euler") {
    cfg.method = Method::euler;
  } else {
    throw ConfigError("integrate.method", "expected rk4 or euler");
  }
  cfg.t0 = integ.contains("t0") ? as_number(integ.at("t0"), "integrate.t0") : 0.0;
  if (integ.contains("tf")) {
    cfg.tf = as_number(integ.at("tf"), "integrate.tf");
  } else if (integ.contains("tf_over_pi")) {
    cfg.tf = as_number(integ.at("tf_over_pi"), "integrate.tf_over_pi") * std::numbers::pi;
  } else {
    throw ConfigError("integrate.tf", "missing (or give tf_over_pi)");
  }
  if (!(cfg.tf > cfg.t0)) throw ConfigError("integrate.tf", "must exceed t0");
  cfg.steps = as_count(require(integ, "steps", "integrate."), "integrate.steps");
  if (cfg.steps < 1) throw ConfigError("integrate.steps", "must be at least 1");

  if (root.contains("verify")) {
    const auto& v = root.at("verify");
    if (v.contains("samples")) cfg.samples = as_count(v.at("samples"), "verify.samples");
    if (v.contains("seed")) cfg.seed = as_count(v.at("seed"), "verify.seed");
  }
  if (root.contains("output") && root.at("output").contains("dir")) {
    const auto& d = root.at("output").at("dir");
    if (!d.is_string()) throw ConfigError("output.dir", "must be a string");
    cfg.output_dir = d.get<std::string>();
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("<file>", "cannot open '" + path + "'");
  json root;
  try {
    root = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(root);
}

struct RunReport {
  std::string id;
  double wall_seconds = 0.0;
  std::size_t steps = 0;
  std::vector<double> max_offset_rate;  // per step
  std::vector<double> min_growth_rate;  // per step, ellipsoid runs only
  std::vector<double> final_offset;
  std::optional<VerificationReport> verification;
};

struct RunResult {
  EmbeddingTrajectory trajectory;
  RunReport report;
};

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto s0 = EmbeddingState::from_parametope(cfg.initial);
  const auto start = std::chrono::steady_clock::now();
  auto traj = integrate(cfg.system, s0, cfg.strategy, cfg.t0, cfg.tf, cfg.steps, cfg.method);
  const auto stop = std::chrono::steady_clock::now();

  RunReport report;
  report.id = cfg.id;
  report.wall_seconds = std::chrono::duration<double>(stop - start).count();
  report.steps = cfg.steps;
  for (const auto& d : traj.diagnostics) {
    report.max_offset_rate.push_back(d.max_offset_rate);
    if (cfg.strategy.variant == OffsetBound::ellipsoid_eig) report.min_growth_rate.push_back(d.min_growth_rate);
  }
  report.final_offset = traj.states.back().offset;
  return {std::move(traj), std::move(report)};
}

inline json to_json(const RunReport& r) {
  json j{{"id", r.id},
         {"wall_seconds", r.wall_seconds},
         {"steps", r.steps},
         {"max_offset_rate", r.max_offset_rate},
         {"final_offset", r.final_offset}};
  if (!r.min_growth_rate.empty()) j["min_growth_rate"] = r.min_growth_rate;
  if (r.verification) j["verification"] = to_json(*r.verification);
  return j;
}

}  // namespace ptope
