#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/errors.hpp"
#include "qsocket/helmholtz.hpp"
#include "svg_plot.hpp"

namespace qsocket::cli {

namespace {

std::ofstream open_output(const Context& ctx, const std::string& name,
                          std::ios::openmode mode = std::ios::out) {
  const auto path = ctx.out_dir / name;
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw InvalidInput(fmt::format("cannot write '{}'", path.string()));
  return f;
}

Grid solver_grid(const RunConfig& cfg) {
  if (cfg.cavity.length_a != cfg.cavity.depth_e) {
    throw InvalidInput("the field solver needs a square cross-section (length_mm == depth_mm)");
  }
  return cfg.grid;
}

}  // namespace

void cmd_modes(const RunConfig& cfg, const Context& ctx) {
  if (cfg.modes.count < 1) throw InvalidInput("modes.count must be >= 1");
  const auto modes = lowest_modes(cfg.cavity, static_cast<std::size_t>(cfg.modes.count));
  auto csv = open_output(ctx, "modes.csv");
  csv << "n,m,l,f_Hz\n";
  fmt::print(ctx.out, "{:>3} {:>3} {:>3} {:>14}\n", "n", "m", "l", "f (GHz)");
  for (const auto& m : modes) {
    fmt::print(csv, "{},{},{},{:.9e}\n", m.index.n, m.index.m, m.index.l, m.frequency);
    fmt::print(ctx.out, "{:>3} {:>3} {:>3} {:>14.6f}\n", m.index.n, m.index.m, m.index.l,
               m.frequency / 1e9);
  }
}

void cmd_fence(const RunConfig& cfg, const Context& ctx) {
  const auto& plan = cfg.fence.plan;
  const auto layout = generate_fence_layout(plan);
  {
    auto csv = open_output(ctx, "fence_layout.csv");
    write_layout_csv(csv, layout);
  }
  const double f_tilde = fence_scaled_frequency(plan.iterations, plan.division_factor);
  const double f_101 = mode_frequency(cfg.cavity, {1, 0, 1});
  const double analytic = f_tilde * f_101;

  auto csv = open_output(ctx, "fence_summary.csv");
  csv << "iterations,division_factor,N,f_tilde_c,f_c_analytic_Hz";
  if (cfg.fence.solve) csv << ",f_c_numerical_Hz";
  csv << "\n";
  fmt::print(csv, "{},{},{},{:.12g},{:.9e}", plan.iterations, plan.division_factor, layout.size(),
             f_tilde, analytic);
  fmt::print(ctx.out, "d = {}, n = {}: N = {} wires, f_tilde_c = {:g}, f_c = {:.6f} GHz (analytic)\n",
             plan.iterations, plan.division_factor, layout.size(), f_tilde, analytic / 1e9);
  if (cfg.fence.solve) {
    const Grid grid = solver_grid(cfg);
    const auto sol = dominant_eigenmode(grid, rasterize_wires(grid, layout), cfg.solver);
    fmt::print(csv, ",{:.9e}", sol.frequency);
    fmt::print(ctx.out, "numerical f_c = {:.6f} GHz (resolution {}, residual {:.2e})\n",
               sol.frequency / 1e9, grid.resolution, sol.residual);
  }
  csv << "\n";
}

void cmd_pin(const RunConfig& cfg, const Context& ctx) {
  PinningConfig pc = cfg.pin.config;
  pc.grid = solver_grid(cfg);
  WireLayout seeds;
  seeds.diameter = pc.wire_diameter;
  if (cfg.pin.seed_layout) {
    std::ifstream in(*cfg.pin.seed_layout);
    if (!in) {
      throw InvalidInput(fmt::format("cannot open seed layout '{}'", cfg.pin.seed_layout->string()));
    }
    seeds = read_layout_csv(in, pc.wire_diameter);
    if (!seeds.empty() && seeds.diameter != pc.wire_diameter) {
      throw InvalidInput("seed layout wire diameter differs from pinning.wire_diameter_um");
    }
  }

  PinningObserver observer = [&](const PinningIteration& it, const EigenSolution& sol) {
    fmt::print(ctx.out, "d = {:>2}: +{:<3} N = {:>3}  f_c = {:.6f} GHz", it.iteration,
               it.wires_added, it.total_wires, it.frequency / 1e9);
    if (it.skipped_overlaps > 0) fmt::print(ctx.out, "  ({} skipped: overlap)", it.skipped_overlaps);
    fmt::print(ctx.out, "\n");
    if (cfg.pin.write_fields) {
      auto pgm = open_output(ctx, fmt::format("pinning_field_d{:02}.pgm", it.iteration),
                             std::ios::out | std::ios::binary);
      write_field_pgm(pgm, sol.field);
    }
  };
  const auto report = run_pinning(pc, seeds, observer);
  {
    auto csv = open_output(ctx, "pinning_report.csv");
    write_pinning_report_csv(csv, report);
  }
  {
    auto csv = open_output(ctx, "pinning_layout.csv");
    write_layout_csv(csv, report.final_layout);
  }
  fmt::print(ctx.out, "status: {}, N = {}, f_c = {:.6f} GHz\n", to_string(report.status),
             report.final_layout.size(), report.final_solution.frequency / 1e9);
}

void cmd_leakage(const RunConfig& cfg, const Context& ctx) {
  SweepConfig sweep = cfg.leakage.sweep;
  if (sweep.frequency_source == FrequencySource::numerical) sweep.pinning.grid = solver_grid(cfg);
  const auto result = leakage_sweep(sweep);
  {
    auto csv = open_output(ctx, "leakage_sweep.csv");
    write_sweep_csv(csv, result);
  }
  auto report_crossing = [&](const char* name, const std::optional<double>& delta) {
    if (delta) {
      fmt::print(ctx.out, "{} p < p_th = {:g} from |Delta| = {:.6e} Hz = {:.2f} g0\n", name,
                 sweep.p_threshold, *delta, *delta / sweep.g0);
    } else {
      fmt::print(ctx.out, "{} p never drops below p_th = {:g}\n", name, sweep.p_threshold);
    }
  };
  report_crossing("undamped:", result.threshold_crossing_delta);
  if (sweep.damping) report_crossing("damped:  ", result.damped_crossing_delta);

  if (cfg.leakage.plot) {
    LogPlot plot;
    plot.title = "Depolarizing probability vs. detuning";
    plot.x_label = "Delta / g0";
    plot.y_label = "p";
    PlotSeries undamped{"no damping", "#1f77b4", {}, {}};
    PlotSeries damped{"T1, T2 damping", "#d62728", {}, {}};
    for (const auto& r : result.rows) {
      undamped.x.push_back(r.detuning / sweep.g0);
      undamped.y.push_back(r.p_undamped);
      if (sweep.damping) {
        damped.x.push_back(r.detuning / sweep.g0);
        damped.y.push_back(r.p_damped);
      }
    }
    plot.series.push_back(std::move(undamped));
    if (sweep.damping) plot.series.push_back(std::move(damped));
    plot.reference_y = sweep.p_threshold;
    plot.reference_label = "p_th";
    auto svg = open_output(ctx, "leakage_plot.svg");
    write_log_plot_svg(svg, plot);
  }
}

void cmd_fit(const std::filesystem::path& data, const Context& ctx) {
  std::ifstream in(data);
  if (!in) throw InvalidInput(fmt::format("cannot open fit data '{}'", data.string()));
  const auto fit = fit_anticrossing(read_anticrossing_csv(in));
  {
    auto report = open_output(ctx, "fit_report.txt");
    write_fit_report(report, fit);
  }
  write_fit_report(ctx.out, fit);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity-mode leakage simulator for large-scale qubit packages", "qsocket"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--config", config_path, "YAML run configuration");
  app.add_option("--out", out_dir, "Output directory (created if missing)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed of the eigensolver start block");
  app.add_option("--jobs", jobs, "Parallel sweep rows")->check(CLI::PositiveNumber);

  auto* modes = app.add_subcommand("modes", "Closed-form cavity mode table");
  int mode_count = 0;
  double eps_r = 0.0;
  auto* count_opt = modes->add_option("--count", mode_count, "Number of modes");
  auto* eps_opt = modes->add_option("--eps-r", eps_r, "Relative permittivity of the filling");

  auto* fence = app.add_subcommand("fence", "Half-wave fence layout and frequency");
  int fence_d = 0, fence_n = 0, fence_res = 0;
  double fence_wire_um = 0.0;
  bool fence_solve = false;
  auto* fence_d_opt = fence->add_option("--iterations,-d", fence_d, "Fence iteration d");
  auto* fence_n_opt = fence->add_option("--division", fence_n, "Division factor n");
  auto* fence_wire_opt = fence->add_option("--wire-um", fence_wire_um, "Wire diameter (um)");
  auto* fence_res_opt = fence->add_option("--resolution", fence_res, "Solver grid nodes per side");
  fence->add_flag("--solve", fence_solve, "Add the numerical dominant-mode frequency");

  auto* pin = app.add_subcommand("pin", "Antinode pinning loop");
  long long max_wires = 0;
  double target_ghz = 0.0, pin_wire_um = 0.0, theta = 0.0, min_sep_mm = 0.0;
  int pin_res = 0;
  std::string seed_layout;
  bool fields = false;
  auto* max_wires_opt = pin->add_option("--max-wires", max_wires, "Wire budget");
  auto* target_opt = pin->add_option("--target-ghz", target_ghz, "Stop once f_c reaches this");
  auto* pin_wire_opt = pin->add_option("--wire-um", pin_wire_um, "Wire diameter (um)");
  auto* theta_opt = pin->add_option("--threshold", theta, "Antinode threshold (fraction of max)");
  auto* sep_opt = pin->add_option("--min-sep-mm", min_sep_mm, "Antinode spacing (mm)");
  auto* pin_res_opt = pin->add_option("--resolution", pin_res, "Solver grid nodes per side");
  auto* seed_layout_opt = pin->add_option("--seed-layout", seed_layout, "Initial wires (layout CSV)");
  pin->add_flag("--fields", fields, "Write a PGM field image per pass");

  auto* leakage = app.add_subcommand("leakage", "Depolarizing probability sweep over N");
  bool no_damping = false, no_plot = false;
  std::string source;
  leakage->add_flag("--no-damping", no_damping, "Skip the damped curve");
  leakage->add_flag("--no-plot", no_plot, "Do not write the SVG plot");
  auto* source_opt = leakage->add_option("--source", source, "analytic or numerical")
                         ->check(CLI::IsMember({"analytic", "numerical"}));

  auto* fit = app.add_subcommand("fit", "Fit g and f_c to anticrossing data");
  std::string fit_data;
  fit->add_option("data", fit_data, "CSV f_R_Hz,lower_Hz,upper_Hz[,sigma_lower_Hz,sigma_upper_Hz]")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (seed_opt->count()) cfg.solver.seed = seed;
    if (eps_opt->count()) cfg.cavity.relative_permittivity = eps_r;
    if (count_opt->count()) cfg.modes.count = mode_count;
    if (fence_d_opt->count()) cfg.fence.plan.iterations = fence_d;
    if (fence_n_opt->count()) cfg.fence.plan.division_factor = fence_n;
    if (fence_wire_opt->count()) cfg.fence.plan.wire_diameter = fence_wire_um * 1e-6;
    if (fence_solve) cfg.fence.solve = true;
    if (fence_res_opt->count()) cfg.grid.resolution = fence_res;
    if (max_wires_opt->count()) {
      if (max_wires < 0) throw InvalidInput("--max-wires must be >= 0");
      cfg.pin.config.max_wires = static_cast<std::size_t>(max_wires);
    }
    if (target_opt->count()) cfg.pin.config.target_frequency = target_ghz * 1e9;
    if (pin_wire_opt->count()) cfg.pin.config.wire_diameter = pin_wire_um * 1e-6;
    if (theta_opt->count()) cfg.pin.config.threshold = theta;
    if (sep_opt->count()) cfg.pin.config.min_separation = min_sep_mm * 1e-3;
    if (pin_res_opt->count()) cfg.grid.resolution = pin_res;
    if (seed_layout_opt->count()) cfg.pin.seed_layout = seed_layout;
    if (fields) cfg.pin.write_fields = true;
    if (no_damping) cfg.leakage.sweep.damping = false;
    if (no_plot) cfg.leakage.plot = false;
    if (source_opt->count()) {
      cfg.leakage.sweep.frequency_source =
          source == "numerical" ? FrequencySource::numerical : FrequencySource::analytic;
    }
    cfg.leakage.sweep.jobs = jobs;
    propagate_shared(cfg);
    cfg.cavity.validate();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw InvalidInput(fmt::format("cannot create output directory '{}': {}", out_dir, ec.message()));
    const Context ctx{out_dir, out};

    if (*modes) cmd_modes(cfg, ctx);
    else if (*fence) cmd_fence(cfg, ctx);
    else if (*pin) cmd_pin(cfg, ctx);
    else if (*leakage) cmd_leakage(cfg, ctx);
    else if (*fit) cmd_fit(fit_data, ctx);
    return kExitSuccess;
  } catch (const InvalidInput& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    fmt::print(err, "error: {} (residual {:.3e})\n", e.what(), e.residual());
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitFailure;
  }
}

}  // namespace qsocket::cli
