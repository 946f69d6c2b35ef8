#pragma once

#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptope/embedding.hpp"
#include "ptope/errors.hpp"
#include "ptope/parametope.hpp"
#include "ptope/verify.hpp"

namespace ptope {

using json = nlohmann::json;

// ---- Parametope JSON: {"kind", "center", "alpha" (row-major), "offset"} ----

inline json to_json(const Parametope& p) {
  return json{{"kind", to_string(p.kind())},
              {"center", p.center()},
              {"alpha", std::vector<double>(p.alpha().data().begin(), p.alpha().data().end())},
              {"offset", p.offset()}};
}

inline SetKind parse_kind(const std::string& s, const std::string& field) {
  if (s == "symmetric_polytope") return SetKind::symmetric_polytope;
  if (s == "ellipsoid") return SetKind::ellipsoid;
  throw ConfigError(field, "unknown kind '" + s + "' (expected symmetric_polytope or ellipsoid)");
}

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(path + key, "missing");
  return j.at(key);
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "must be a number");
  return j.get<double>();
}

inline std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "must be a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline DenseMatrix as_square(const json& j, std::size_t n, const std::string& path) {
  const auto v = as_numbers(j, path);
  if (v.size() != n * n) {
    throw ConfigError(path, "must hold " + std::to_string(n * n) + " row-major entries, got " + std::to_string(v.size()));
  }
  return DenseMatrix::from_row_major(n, n, v);
}

}  // namespace detail

// Accepts either "alpha" or "shape_matrix" (P, with alpha = P^{1/2}).
inline Parametope parametope_from_json(const json& j, const std::string& path = "") {
  using namespace detail;
  const auto& kind_j = require(j, "kind", path);
  if (!kind_j.is_string()) throw ConfigError(path + "kind", "must be a string");
  const SetKind kind = parse_kind(kind_j.get<std::string>(), path + "kind");
  auto center = as_numbers(require(j, "center", path), path + "center");
  const std::size_t n = center.size();
  if (n == 0) throw ConfigError(path + "center", "must be non-empty");

  DenseMatrix alpha;
  if (j.contains("alpha")) {
    alpha = as_square(j.at("alpha"), n, path + "alpha");
  } else if (j.contains("shape_matrix")) {
    try {
      alpha = sqrt_sym_psd(as_square(j.at("shape_matrix"), n, path + "shape_matrix"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(path + "shape_matrix", e.what());
    }
  } else {
    throw ConfigError(path + "alpha", "missing (or give shape_matrix)");
  }
  const auto offset = as_numbers(require(j, "offset", path), path + "offset");
  try {
    (void)invert(alpha);
    return Parametope(kind, std::move(center), std::move(alpha), offset);
  } catch (const SingularMatrixError& e) {
    throw ConfigError(path + "alpha", e.what());
  } catch (const Error& e) {
    throw ConfigError(path + "offset", e.what());
  }
}

// ---- Trajectory CSV: t, xc_1..xc_n, alpha_11..alpha_nn, y_1..y_K ----

inline std::string trajectory_csv_header(std::size_t n, std::size_t k) {
  std::ostringstream os;
  os << "t";
  for (std::size_t i = 1; i <= n; ++i) os << ",xc_" << i;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) os << ",alpha_" << i << j;
  for (std::size_t i = 1; i <= k; ++i) os << ",y_" << i;
  return os.str();
}

inline void write_trajectory_csv(std::ostream& os, const EmbeddingTrajectory& traj) {
  if (traj.states.empty()) return;
  const auto& s0 = traj.states.front();
  os << trajectory_csv_header(s0.dim(), s0.offset.size()) << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << traj.times[i];
    for (double v : traj.states[i].pack()) os << ',' << v;
    os << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw Error("csv: missing header");
  {
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != table.header.size()) throw Error("csv: row width differs from header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---- frame exports ----

inline json point_list(const std::vector<std::vector<double>>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(p);
  return arr;
}

inline json vertex_frames(const EmbeddingTrajectory& traj) {
  json frames = json::array();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    frames.push_back({{"t", traj.times[i]}, {"points", point_list(vertices(traj.states[i].to_parametope()))}});
  }
  return frames;
}

inline json boundary_frames(const EmbeddingTrajectory& traj, std::size_t count, std::uint64_t seed) {
  json frames = json::array();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    frames.push_back(
        {{"t", traj.times[i]}, {"points", point_list(boundary_samples(traj.states[i].to_parametope(), count, seed))}});
  }
  return frames;
}

inline json parametope_frames(const EmbeddingTrajectory& traj) {
  json frames = json::array();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    frames.push_back({{"t", traj.times[i]}, {"set", to_json(traj.states[i].to_parametope())}});
  }
  return frames;
}

inline json to_json(const VerificationReport& r) {
  json v = json::array();
  for (const auto& x : r.first_violations) {
    v.push_back({{"sample", x.sample},
                 {"time_index", x.time_index},
                 {"t", x.time},
                 {"facet", {{"coordinate", x.facet.coordinate},
                            {"side", x.facet.side == FacetSide::upper ? "upper" : "lower"}}},
                 {"excess", x.excess}});
  }
  return json{{"samples", r.samples},
              {"checks", r.checks},
              {"violations", r.violations},
              {"max_excess", r.checks ? json(r.max_excess) : json(nullptr)},
              {"first_violations", v}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << text;
}

}  // namespace ptope
