// Experiment driver: run / verify / export reachable parametope tubes.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ptope/ptope.hpp"

namespace fs = std::filesystem;
using namespace ptope;

namespace {

constexpr int kExitViolations = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

fs::path output_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("PTOPE_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

fs::path prepare_output(const ExperimentConfig& cfg) {
  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir);
  return dir;
}

void write_run_artifacts(const fs::path& dir, const RunResult& result) {
  std::ostringstream csv;
  write_trajectory_csv(csv, result.trajectory);
  write_text((dir / "trajectory.csv").string(), csv.str());
  write_text((dir / "parametopes.json").string(), parametope_frames(result.trajectory).dump(1) + "\n");
}

int cmd_run(const std::string& config_path) {
  const auto cfg = load_config(config_path);
  const auto dir = prepare_output(cfg);
  const auto result = run_experiment(cfg);
  write_run_artifacts(dir, result);
  const auto report = to_json(result.report);
  write_text((dir / "report.json").string(), report.dump(2) + "\n");
  std::cout << "run " << cfg.id << ": " << cfg.steps << " steps in " << result.report.wall_seconds << " s\n"
            << "final offset " << json(result.report.final_offset).dump() << "\n"
            << "wrote " << (dir / "trajectory.csv").string() << ", " << (dir / "parametopes.json").string() << "\n";
  return 0;
}

int cmd_verify(const std::string& config_path, std::optional<std::size_t> samples, std::optional<std::uint64_t> seed,
               double offset_scale) {
  const auto cfg = load_config(config_path);
  const auto dir = prepare_output(cfg);
  auto result = run_experiment(cfg);
  const auto traj = offset_scale == 1.0 ? result.trajectory : scale_offsets(result.trajectory, offset_scale);
  const auto vr = verify_containment(cfg.system, traj, cfg.initial, samples.value_or(cfg.samples), seed.value_or(cfg.seed));
  result.report.verification = vr;
  write_text((dir / "verify_report.json").string(), to_json(result.report).dump(2) + "\n");

  std::cout << "verify " << cfg.id << ": " << vr.samples << " samples, " << vr.checks << " checks, " << vr.violations
            << " violations";
  if (vr.checks) std::cout << ", max excess " << vr.max_excess;
  std::cout << "\n";
  for (const auto& v : vr.first_violations) {
    std::cout << "  violation: sample " << v.sample << " t=" << v.time << " facet (" << v.facet.coordinate << ", "
              << (v.facet.side == FacetSide::upper ? "upper" : "lower") << ") excess " << v.excess << "\n";
  }
  return vr.violations == 0 ? 0 : kExitViolations;
}

int cmd_export(const std::string& config_path, const std::string& what, std::size_t count) {
  const auto cfg = load_config(config_path);
  if (what == "vertices" && cfg.initial.kind() != SetKind::symmetric_polytope) {
    throw ConfigError("initial.kind", "--what vertices needs a symmetric_polytope");
  }
  if (what == "boundary" && cfg.initial.kind() != SetKind::ellipsoid) {
    throw ConfigError("initial.kind", "--what boundary needs an ellipsoid");
  }
  const auto dir = prepare_output(cfg);
  const auto result = run_experiment(cfg);
  fs::path out;
  if (what == "vertices") {
    out = dir / "vertices.json";
    write_text(out.string(), vertex_frames(result.trajectory).dump(1) + "\n");
  } else if (what == "boundary") {
    out = dir / "boundary.json";
    write_text(out.string(), boundary_frames(result.trajectory, count, cfg.seed).dump(1) + "\n");
  } else {
    out = dir / "trajectory.csv";
    std::ostringstream csv;
    write_trajectory_csv(csv, result.trajectory);
    write_text(out.string(), csv.str());
  }
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachable parametope computation via controlled embedding systems"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "integrate the embedding system and write the trajectory");
  run->add_option("config", config, "experiment config (JSON)")->required();

  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  double offset_scale = 1.0;
  auto* verify = app.add_subcommand("verify", "Monte-Carlo containment check of the computed tube");
  verify->add_option("config", config, "experiment config (JSON)")->required();
  verify->add_option("--samples", samples, "initial points to simulate (default: config verify.samples)");
  verify->add_option("--seed", seed, "sampling seed (default: config verify.seed)");
  verify->add_option("--offset-scale", offset_scale, "scale offsets before checking (negative control)");

  std::string what;
  std::size_t count = 64;
  auto* exp = app.add_subcommand("export", "export per-step vertices, boundary samples or the trajectory");
  exp->add_option("config", config, "experiment config (JSON)")->required();
  exp->add_option("--what", what, "vertices | boundary | trajectory")
      ->required()
      ->check(CLI::IsMember({"vertices", "boundary", "trajectory"}));
  exp->add_option("--count", count, "boundary samples per frame");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config);
    if (*verify) return cmd_verify(config, samples, seed, offset_scale);
    return cmd_export(config, what, count);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
