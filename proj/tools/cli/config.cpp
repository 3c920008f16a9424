#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "qsocket/errors.hpp"

namespace qsocket::cli {

namespace {

void check_keys(const YAML::Node& node, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw InvalidInput(fmt::format("section '{}' must be a mapping", section));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw InvalidInput(fmt::format("unknown key '{}' in section '{}'", key, section));
    }
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out, const std::string& section) {
  const auto v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw InvalidInput(fmt::format("{}.{}: cannot parse '{}'", section, key, YAML::Dump(v)));
  }
}

// Reads a number given in `unit` and stores it in SI.
void read_scaled(const YAML::Node& node, const char* key, double scale, double& out,
                 const std::string& section) {
  if (!node[key]) return;
  double v = 0.0;
  read(node, key, v, section);
  out = v * scale;
}

void parse_cavity(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "cavity", {"length_mm", "height_mm", "depth_mm", "relative_permittivity"});
  read_scaled(n, "length_mm", 1e-3, cfg.cavity.length_a, "cavity");
  read_scaled(n, "height_mm", 1e-3, cfg.cavity.height_b, "cavity");
  read_scaled(n, "depth_mm", 1e-3, cfg.cavity.depth_e, "cavity");
  read(n, "relative_permittivity", cfg.cavity.relative_permittivity, "cavity");
}

void parse_modes(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "modes", {"count"});
  read(n, "count", cfg.modes.count, "modes");
}

void parse_fence(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "fence", {"division_factor", "iterations", "wire_diameter_um", "solve"});
  read(n, "division_factor", cfg.fence.plan.division_factor, "fence");
  read(n, "iterations", cfg.fence.plan.iterations, "fence");
  read_scaled(n, "wire_diameter_um", 1e-6, cfg.fence.plan.wire_diameter, "fence");
  read(n, "solve", cfg.fence.solve, "fence");
}

void parse_grid(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "grid", {"resolution"});
  read(n, "resolution", cfg.grid.resolution, "grid");
}

void parse_solver(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "solver",
             {"seed", "max_iterations", "eigenvalue_tolerance", "residual_tolerance"});
  read(n, "seed", cfg.solver.seed, "solver");
  read(n, "max_iterations", cfg.solver.max_iterations, "solver");
  read(n, "eigenvalue_tolerance", cfg.solver.eigenvalue_tolerance, "solver");
  read(n, "residual_tolerance", cfg.solver.residual_tolerance, "solver");
}

void parse_pinning(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "pinning",
             {"target_ghz", "max_wires", "wire_diameter_um", "threshold", "min_separation_mm",
              "seed_layout", "write_fields"});
  auto& pc = cfg.pin.config;
  if (n["target_ghz"]) {
    if (n["target_ghz"].IsNull()) {
      pc.target_frequency.reset();
    } else {
      double ghz = 0.0;
      read(n, "target_ghz", ghz, "pinning");
      pc.target_frequency = ghz * 1e9;
    }
  }
  read(n, "max_wires", pc.max_wires, "pinning");
  read_scaled(n, "wire_diameter_um", 1e-6, pc.wire_diameter, "pinning");
  read(n, "threshold", pc.threshold, "pinning");
  if (n["min_separation_mm"]) {
    if (n["min_separation_mm"].IsNull()) {
      pc.min_separation.reset();
    } else {
      double mm = 0.0;
      read(n, "min_separation_mm", mm, "pinning");
      pc.min_separation = mm * 1e-3;
    }
  }
  if (n["seed_layout"]) {
    std::string path;
    read(n, "seed_layout", path, "pinning");
    cfg.pin.seed_layout = path;
  }
  read(n, "write_fields", cfg.pin.write_fields, "pinning");
}

void parse_leakage(const YAML::Node& n, RunConfig& cfg) {
  check_keys(n, "leakage",
             {"f_101_ghz", "f_q_ghz", "g0_mhz", "horizon_ns", "t1_us", "t2_us", "p_threshold",
              "wire_counts", "frequency_source", "damping", "plot", "time_points",
              "steps_per_period"});
  auto& s = cfg.leakage.sweep;
  read_scaled(n, "f_101_ghz", 1e9, s.f_101, "leakage");
  read_scaled(n, "f_q_ghz", 1e9, s.f_q, "leakage");
  read_scaled(n, "g0_mhz", 1e6, s.g0, "leakage");
  read_scaled(n, "horizon_ns", 1e-9, s.horizon, "leakage");
  read_scaled(n, "t1_us", 1e-6, s.t1, "leakage");
  read_scaled(n, "t2_us", 1e-6, s.t2, "leakage");
  read(n, "p_threshold", s.p_threshold, "leakage");
  read(n, "wire_counts", s.wire_counts, "leakage");
  if (n["frequency_source"]) {
    std::string source;
    read(n, "frequency_source", source, "leakage");
    if (source == "analytic") s.frequency_source = FrequencySource::analytic;
    else if (source == "numerical") s.frequency_source = FrequencySource::numerical;
    else throw InvalidInput(fmt::format("leakage.frequency_source: unknown value '{}'", source));
  }
  read(n, "damping", s.damping, "leakage");
  read(n, "plot", cfg.leakage.plot, "leakage");
  read(n, "time_points", s.n_time_points, "leakage");
  read(n, "steps_per_period", s.steps_per_period, "leakage");
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  propagate_shared(cfg);
  return cfg;
}

void propagate_shared(RunConfig& cfg) {
  cfg.grid.side = cfg.cavity.length_a;
  cfg.solver.relative_permittivity = cfg.cavity.relative_permittivity;
  cfg.fence.plan.cavity_side = cfg.cavity.length_a;
  cfg.pin.config.grid = cfg.grid;
  cfg.pin.config.solver = cfg.solver;
  cfg.leakage.sweep.pinning = cfg.pin.config;
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InvalidInput(fmt::format("config is not valid YAML: {}", e.what()));
  }
  RunConfig cfg;
  if (root.IsNull()) {
    propagate_shared(cfg);
    return cfg;
  }
  if (!root.IsMap()) throw InvalidInput("config must be a mapping of sections");
  check_keys(root, "<top level>",
             {"cavity", "modes", "fence", "grid", "solver", "pinning", "leakage"});
  if (root["cavity"]) parse_cavity(root["cavity"], cfg);
  if (root["modes"]) parse_modes(root["modes"], cfg);
  if (root["fence"]) parse_fence(root["fence"], cfg);
  if (root["grid"]) parse_grid(root["grid"], cfg);
  if (root["solver"]) parse_solver(root["solver"], cfg);
  if (root["pinning"]) parse_pinning(root["pinning"], cfg);
  if (root["leakage"]) parse_leakage(root["leakage"], cfg);
  propagate_shared(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace qsocket::cli
