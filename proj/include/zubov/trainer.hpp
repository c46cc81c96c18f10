#pragma once

#include "zubov/dynamics.hpp"
#include "zubov/grid.hpp"
#include "zubov/losses.hpp"
#include "zubov/net.hpp"
#include "zubov/rollout.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zubov {

/// Everything the outer training loop needs. Defaults follow the benchmark
/// profiles; r_max and v_cap resolve from the domain and alpha when left
/// non-positive.
struct TrainConfig {
  std::string system = "vdp";
  std::optional<Domain> omega;  // defaults to the system's domain
  double alpha = 0.5;
  double lambda_r = 1.0;
  double lambda_d = 10.0;
  int m_b = 20000;
  int m_r = 20000;
  int m_d = 2000;
  int iterations = 20;  // outer policy iterations
  int epochs = 200;     // Adam steps per iteration
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  int width = 50;
  int depth = 5;
  RolloutParams rollout;
  bool resample = true;     // fresh sample clouds every iteration
  double inner_tol = 1e-5;  // early stop for the epoch loop
  int minibatch = 0;        // 0 = full batch; otherwise a cycling window size
  int threads = 0;          // 0 = automatic
  std::string out_dir;      // empty = no files written

  void validate() const;
};

struct EpochRecord {
  int iteration = 0;
  int epoch = 0;
  double total = 0, boundary = 0, residual = 0, data = 0;
};

struct IterationRecord {
  int iteration = 0;
  double anchor_mean_v_hat = 0.0;
  double anchor_diverged_fraction = 0.0;
  int epochs_run = 0;
  double improvement_seconds = 0.0;
  double evaluation_seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::vector<IterationRecord> iterations;
  bool aborted = false;
  std::string diagnostic;
};

struct TrainResult {
  MlpParams params;
  TrainHistory history;
};

/// Runs the outer policy iteration: per iteration, (a) draw or reuse sample
/// clouds, (b) freeze worst-case disturbances for the residual points and
/// rollout anchor values from the current network, (c) run up to `epochs`
/// Adam steps on the composite loss, stopping early below inner_tol.
///
/// Sample streams derive from the seed as derive_seed(seed, purpose, index)
/// with purposes 0 = init, 1 = boundary, 2 = residual, 3 = anchors, and
/// index = iteration (or 1 for every iteration when resample = false), so a
/// run is reproducible bit for bit.
///
/// On a non-finite loss or gradient the trainer rolls back to the start of
/// the iteration, halves the learning rate once and retries; a second
/// blow-up aborts with the last good parameters and a diagnostic.
///
/// With out_dir set, emits one checkpoint per iteration, a final checkpoint,
/// and history.csv (rows iter,epoch,total,boundary,residual,data).
TrainResult train(const TrainConfig& config);
TrainResult train(const TrainConfig& config, const PerturbedSystem& system);

/// Two grid axes for slicing fields of higher-dimensional systems; the other
/// coordinates come from `pinned` (zeros when empty).
struct SliceSpec {
  int axis0 = 0;
  int axis1 = 1;
  Vec pinned;
};

/// Dense network evaluation over a grid slice; values are clamped to [0, 1]
/// for reporting. Row-major with axis0 outermost.
ValueGrid evaluate_on_grid(const MlpParams& params, const Domain& omega,
                           int resolution0, int resolution1,
                           const SliceSpec& slice = {});

void write_history_csv(const TrainHistory& history, const std::string& path);

}  // namespace zubov
