#include "zubov/cli.hpp"

#include "zubov/config.hpp"
#include "zubov/contour.hpp"
#include "zubov/errors.hpp"
#include "zubov/fdm.hpp"
#include "zubov/gradcheck.hpp"
#include "zubov/grid_io.hpp"
#include "zubov/parallel.hpp"
#include "zubov/trainer.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace zubov {

namespace {

Domain resolved_omega(const RunConfig& cfg, const PerturbedSystem& system) {
  return cfg.train.omega ? *cfg.train.omega : system.default_domain;
}

int run_train(const std::string& config_path, const std::string& out_dir,
              int threads, long long seed_override) {
  RunConfig cfg = parse_config(config_path);
  if (!out_dir.empty()) cfg.train.out_dir = out_dir;
  if (threads > 0) cfg.train.threads = threads;
  if (seed_override >= 0) cfg.train.seed = static_cast<std::uint64_t>(seed_override);
  if (cfg.train.threads > 0) set_thread_count(cfg.train.threads);

  if (!cfg.train.out_dir.empty()) {
    std::filesystem::create_directories(cfg.train.out_dir);
    write_run_metadata(cfg, (std::filesystem::path(cfg.train.out_dir) /
                             "run_metadata.cfg")
                                .string());
  }
  const TrainResult result = train(cfg.train);
  if (!result.history.epochs.empty()) {
    const EpochRecord& last = result.history.epochs.back();
    std::printf("trained %s: %zu epochs over %zu iterations, final loss %.6g\n",
                cfg.train.system.c_str(), result.history.epochs.size(),
                result.history.iterations.size(), last.total);
  } else {
    std::printf("trained %s: no epochs run\n", cfg.train.system.c_str());
  }
  if (result.history.aborted) {
    std::fprintf(stderr, "aborted: %s\n", result.history.diagnostic.c_str());
    return 1;
  }
  return 0;
}

int run_fdm(const std::string& config_path, const std::string& out_path,
            int resolution, double h, double tol, int max_sweeps, int threads) {
  const RunConfig cfg = parse_config(config_path);
  if (threads > 0) set_thread_count(threads);
  const PerturbedSystem system = make_system(cfg.train.system);
  FdmOptions options;
  options.resolution = resolution > 0 ? resolution : cfg.grid_resolution;
  options.alpha = cfg.train.alpha;
  options.h = h > 0.0 ? h : cfg.fdm_h;
  options.tol = tol > 0.0 ? tol : cfg.fdm_tol;
  options.max_sweeps = max_sweeps > 0 ? max_sweeps : cfg.fdm_max_sweeps;
  const ValueGrid grid = solve_fdm(system, resolved_omega(cfg, system), options);
  export_grid(grid, out_path);
  std::printf("fdm %s: %d sweeps, final residual %.3g%s\n", system.name.c_str(),
              grid.sweeps, grid.final_residual,
              grid.converged ? "" : " (warning: not converged)");
  return 0;
}

int run_eval(const std::string& ckpt_path, const std::string& config_path,
             const std::string& out_path, int resolution, int threads) {
  const RunConfig cfg = parse_config(config_path);
  if (threads > 0) set_thread_count(threads);
  const PerturbedSystem system = make_system(cfg.train.system);
  const MlpParams params = load_checkpoint(ckpt_path);
  if (params.input_dim != system.state_dim) {
    throw ArgumentError("checkpoint input dim does not match the system");
  }
  SliceSpec slice;
  slice.axis0 = cfg.slice_axis0;
  slice.axis1 = cfg.slice_axis1;
  slice.pinned = Vec::Zero(system.state_dim);
  for (const auto& [axis, value] : cfg.slice_pins) {
    if (axis >= system.state_dim) {
      throw ArgumentError("slice pin axis out of range");
    }
    slice.pinned[axis] = value;
  }
  const int res = resolution > 0 ? resolution : cfg.grid_resolution;
  ValueGrid grid =
      evaluate_on_grid(params, resolved_omega(cfg, system), res, res, slice);
  grid.system_name = system.name;
  grid.alpha = cfg.train.alpha;
  export_grid(grid, out_path);
  std::printf("eval %s: %dx%d grid written to %s\n", system.name.c_str(), res,
              res, out_path.c_str());
  return 0;
}

int run_contour(const std::string& grid_path, double level,
                const std::string& out_path) {
  const ValueGrid grid = load_grid(grid_path);
  const Contour contour = extract_contour(grid, level);
  save_contour(contour, out_path);
  std::printf("contour level %g: %zu polyline(s) written to %s\n", level,
              contour.polylines.size(), out_path.c_str());
  return 0;
}

int run_diff(const std::string& a_path, const std::string& b_path,
             const std::string& out_path) {
  const ValueGrid a = load_grid(a_path);
  const ValueGrid b = load_grid(b_path);
  std::printf("sup %.17g\n", sup_diff(a, b));
  std::printf("mean %.17g\n", mean_abs_diff(a, b));
  if (!out_path.empty()) export_grid(diff_grid(a, b), out_path);
  return 0;
}

int run_gradcheck_cmd(long long seed, int input_cases, int param_cases) {
  const GradCheckReport report = run_gradcheck(
      seed >= 0 ? static_cast<std::uint64_t>(seed) : 7, input_cases, param_cases);
  const bool input_ok = report.max_input_grad_rel_err <= kInputGradTolerance;
  const bool param_ok = report.max_param_grad_rel_err <= kParamGradTolerance;
  std::printf("input-gradient max relative error = %.3g over %d cases "
              "(tolerance %g): %s\n",
              report.max_input_grad_rel_err, report.input_cases,
              kInputGradTolerance, input_ok ? "PASS" : "FAIL");
  std::printf("parameter-gradient max relative error = %.3g over %d cases "
              "(tolerance %g): %s\n",
              report.max_param_grad_rel_err, report.param_cases,
              kParamGradTolerance, param_ok ? "PASS" : "FAIL");
  return input_ok && param_ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Worst-case region-of-attraction toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, ckpt_path, grid_path, a_path, b_path;
  int threads = 0;
  long long seed = -1;
  int resolution = 0, max_sweeps = 0;
  double h = 0.0, tol = 0.0, level = 0.9;
  int input_cases = 100, param_cases = 20;

  CLI::App* train_cmd = app.add_subcommand("train", "Train a value network");
  train_cmd->add_option("--config", config_path, "config file")->required();
  train_cmd->add_option("--out", out_path, "output directory");
  train_cmd->add_option("--threads", threads, "worker threads (1 = bitwise runs)");
  train_cmd->add_option("--seed", seed, "override the config seed");

  CLI::App* fdm_cmd = app.add_subcommand("fdm", "Grid reference solution (2-d)");
  fdm_cmd->add_option("--config", config_path, "config file")->required();
  fdm_cmd->add_option("--out", out_path, "grid CSV to write")->required();
  fdm_cmd->add_option("--resolution", resolution, "nodes per axis");
  fdm_cmd->add_option("--step", h, "pseudo-time step (0 = automatic)");
  fdm_cmd->add_option("--tol", tol, "sweep convergence threshold");
  fdm_cmd->add_option("--max-sweeps", max_sweeps, "sweep budget");
  fdm_cmd->add_option("--threads", threads, "worker threads");

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a grid");
  eval_cmd->add_option("--ckpt", ckpt_path, "checkpoint file")->required();
  eval_cmd->add_option("--config", config_path, "config file")->required();
  eval_cmd->add_option("--out", out_path, "grid CSV to write")->required();
  eval_cmd->add_option("--resolution", resolution, "nodes per axis");
  eval_cmd->add_option("--threads", threads, "worker threads");

  CLI::App* contour_cmd =
      app.add_subcommand("contour", "Extract a level set from a grid CSV");
  contour_cmd->add_option("--grid", grid_path, "grid CSV")->required();
  contour_cmd->add_option("--level", level, "level in (0,1), default 0.9");
  contour_cmd->add_option("--out", out_path, "contour CSV to write")->required();

  CLI::App* diff_cmd = app.add_subcommand("diff", "Compare two grid CSVs");
  diff_cmd->add_option("--a", a_path, "first grid")->required();
  diff_cmd->add_option("--b", b_path, "second grid")->required();
  diff_cmd->add_option("--out", out_path, "optional difference grid");

  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "Finite-difference gradient suites");
  gradcheck_cmd->add_option("--seed", seed, "random seed (default 7)");
  gradcheck_cmd->add_option("--input-cases", input_cases, "input-gradient cases");
  gradcheck_cmd->add_option("--param-cases", param_cases, "parameter-gradient cases");

  if (argc < 2) {
    std::cout << app.help() << std::endl;
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help() << std::endl;
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nrun with --help for usage" << std::endl;
    return 2;
  }

  try {
    if (train_cmd->parsed()) return run_train(config_path, out_path, threads, seed);
    if (fdm_cmd->parsed()) {
      return run_fdm(config_path, out_path, resolution, h, tol, max_sweeps, threads);
    }
    if (eval_cmd->parsed()) {
      return run_eval(ckpt_path, config_path, out_path, resolution, threads);
    }
    if (contour_cmd->parsed()) return run_contour(grid_path, level, out_path);
    if (diff_cmd->parsed()) return run_diff(a_path, b_path, out_path);
    if (gradcheck_cmd->parsed()) {
      return run_gradcheck_cmd(seed, input_cases, param_cases);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}

}  // namespace zubov
