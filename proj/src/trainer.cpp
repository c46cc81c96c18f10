#include "zubov/trainer.hpp"

#include "zubov/errors.hpp"
#include "zubov/parallel.hpp"
#include "zubov/reduce.hpp"
#include "zubov/rng.hpp"
#include "zubov/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace zubov {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Mat wrapped_window(const Mat& block, Eigen::Index start, Eigen::Index size) {
  const Eigen::Index m = block.cols();
  if (size >= m) return block;
  start %= m;
  if (start + size <= m) return block.middleCols(start, size);
  Mat out(block.rows(), size);
  const Eigen::Index first = m - start;
  out.leftCols(first) = block.middleCols(start, first);
  out.rightCols(size - first) = block.leftCols(size - first);
  return out;
}

Vec wrapped_window(const Vec& v, Eigen::Index start, Eigen::Index size) {
  const Eigen::Index m = v.size();
  if (size >= m) return v;
  start %= m;
  if (start + size <= m) return v.segment(start, size);
  Vec out(size);
  const Eigen::Index first = m - start;
  out.head(first) = v.segment(start, first);
  out.tail(size - first) = v.head(size - first);
  return out;
}

/// Cycling minibatch window; `step` counts Adam steps within the iteration.
LossBatch slice_batch(const LossBatch& full, int step, int size) {
  LossBatch b = full;
  const Eigen::Index w = size;
  auto start_for = [&](Eigen::Index m) -> Eigen::Index {
    return m > 0 ? (static_cast<Eigen::Index>(step) * w) % m : 0;
  };
  const Eigen::Index sb = start_for(full.boundary_points.cols());
  const Eigen::Index sr = start_for(full.residual_points.cols());
  const Eigen::Index sd = start_for(full.anchor_points.cols());
  b.boundary_points = wrapped_window(full.boundary_points, sb, w);
  b.residual_points = wrapped_window(full.residual_points, sr, w);
  b.residual_deltas = wrapped_window(full.residual_deltas, sr, w);
  b.residual_dirs = wrapped_window(full.residual_dirs, sr, w);
  b.residual_costs = wrapped_window(full.residual_costs, sr, w);
  b.anchor_points = wrapped_window(full.anchor_points, sd, w);
  b.anchor_values = wrapped_window(full.anchor_values, sd, w);
  return b;
}

std::string checkpoint_name(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "checkpoint_iter_%03d.txt", iteration);
  return buf;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (lambda_r < 0.0 || lambda_d < 0.0) {
    throw ArgumentError("loss weights must be nonnegative");
  }
  if (m_b < 1 || m_r < 1 || m_d < 1) {
    throw ArgumentError("sample counts must be >= 1");
  }
  if (iterations < 1) throw ArgumentError("iterations must be >= 1");
  if (epochs < 0) throw ArgumentError("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
  if (width < 1 || depth < 2) {
    throw ArgumentError("network needs width >= 1 and depth >= 2");
  }
  if (minibatch < 0) throw ArgumentError("minibatch must be >= 0");
  if (!(inner_tol >= 0.0)) throw ArgumentError("inner_tol must be >= 0");
  rollout.validate();
  if (omega) omega->validate();
}

TrainResult train(const TrainConfig& config) {
  return train(config, make_system(config.system));
}

TrainResult train(const TrainConfig& config, const PerturbedSystem& system) {
  config.validate();
  if (config.threads > 0) set_thread_count(config.threads);
  const Domain omega = config.omega ? *config.omega : system.default_domain;
  omega.validate();
  if (omega.dim() != system.state_dim) {
    throw ArgumentError("domain dimension does not match the system");
  }

  const bool emit = !config.out_dir.empty();
  if (emit) std::filesystem::create_directories(config.out_dir);
  const auto out_path = [&](const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
  };

  TrainResult result;
  result.params =
      init_params(derive_seed(config.seed, 0, 0), system.state_dim,
                  config.width, config.depth);
  AdamState adam = AdamState::fresh(result.params, config.learning_rate);
  bool retried = false;

  for (int iter = 1; iter <= config.iterations; ++iter) {
    const std::uint64_t stream_index =
        config.resample ? static_cast<std::uint64_t>(iter) : 1;

    // Policy improvement: freeze delta* and anchors from the current network
    // (for iteration 1 that is the freshly initialized one).
    const auto improve_start = std::chrono::steady_clock::now();
    const SampleSet boundary =
        sample_boundary(omega, config.m_b, derive_seed(config.seed, 1, stream_index));
    const SampleSet residual =
        sample_interior(omega, config.m_r, derive_seed(config.seed, 2, stream_index));
    const DisturbanceAssignment assignment =
        assign_disturbances(result.params, system, residual.points, config.alpha);

    IterationRecord irec;
    irec.iteration = iter;
    Mat anchor_points(system.state_dim, 0);
    Vec anchor_values;
    if (config.lambda_d > 0.0) {
      const SampleSet anchors = sample_interior(
          omega, config.m_d, derive_seed(config.seed, 3, stream_index));
      const AnchorSet set =
          build_anchor_set(result.params, system, anchors.points, config.alpha,
                           config.rollout, omega);
      anchor_points = set.points;
      anchor_values = set.v_hat;
      std::vector<double> vs(set.v_hat.data(), set.v_hat.data() + set.v_hat.size());
      irec.anchor_mean_v_hat = sorted_pairwise_mean(std::move(vs));
      Eigen::Index diverged = 0;
      for (auto flag : set.diverged) diverged += flag ? 1 : 0;
      irec.anchor_diverged_fraction =
          static_cast<double>(diverged) / static_cast<double>(set.diverged.size());
    }
    const LossBatch batch = LossBatch::assemble(
        system, boundary.points, residual.points, assignment.delta_star,
        anchor_points, anchor_values, config.alpha, config.lambda_r,
        config.lambda_d);
    irec.improvement_seconds = seconds_since(improve_start);

    // Policy evaluation: Adam on the frozen batch. A non-finite loss or
    // gradient rolls the iteration back, halves the learning rate once and
    // retries; the second failure aborts with the last good parameters.
    const MlpParams params_snapshot = result.params;
    const AdamState adam_snapshot = adam;
    const std::size_t history_mark = result.history.epochs.size();

    bool iteration_done = false;
    while (!iteration_done) {
      const auto eval_start = std::chrono::steady_clock::now();
      bool blew_up = false;
      int epochs_run = 0;
      for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const LossBatch* step_batch = &batch;
        LossBatch window;
        if (config.minibatch > 0) {
          window = slice_batch(batch, epoch - 1, config.minibatch);
          step_batch = &window;
        }
        LossGradient lg;
        try {
          lg = loss_gradient(result.params, *step_batch);
          if (!std::isfinite(lg.terms.total)) {
            throw NumericError("non-finite total loss");
          }
          result.history.epochs.push_back({iter, epoch, lg.terms.total,
                                           lg.terms.boundary, lg.terms.residual,
                                           lg.terms.data});
          epochs_run = epoch;
          if (lg.terms.total < config.inner_tol) break;
          adam_step(adam, result.params, lg.grad);
        } catch (const NumericError& err) {
          blew_up = true;
          if (!retried) {
            retried = true;
            result.params = params_snapshot;
            adam = adam_snapshot;
            adam.learning_rate *= 0.5;
            result.history.epochs.resize(history_mark);
            result.history.diagnostic =
                std::string("retried iteration ") + std::to_string(iter) +
                " at halved learning rate after: " + err.what();
          } else {
            result.params = params_snapshot;
            result.history.epochs.resize(history_mark);
            result.history.aborted = true;
            result.history.diagnostic =
                std::string("aborted at iteration ") + std::to_string(iter) +
                ": " + err.what();
          }
          break;
        }
      }
      irec.evaluation_seconds = seconds_since(eval_start);
      irec.epochs_run = epochs_run;
      if (!blew_up) {
        iteration_done = true;
      } else if (result.history.aborted) {
        break;
      }
      // else: retry the epoch loop with the restored state
    }

    result.history.iterations.push_back(irec);
    if (result.history.aborted) break;
    if (emit) save_checkpoint(result.params, out_path(checkpoint_name(iter)));
  }

  if (emit) {
    save_checkpoint(result.params, out_path("checkpoint_final.txt"));
    write_history_csv(result.history, out_path("history.csv"));
  }
  return result;
}

ValueGrid evaluate_on_grid(const MlpParams& params, const Domain& omega,
                           int resolution0, int resolution1,
                           const SliceSpec& slice) {
  params.validate();
  if (resolution0 < 2 || resolution1 < 2) {
    throw ArgumentError("grid resolution must be >= 2");
  }
  const int n = params.input_dim;
  if (omega.dim() != n) {
    throw ArgumentError("domain dimension does not match the network");
  }
  if (n < 2) throw ArgumentError("grid evaluation needs state dim >= 2");
  if (slice.axis0 < 0 || slice.axis1 < 0 || slice.axis0 >= n ||
      slice.axis1 >= n || slice.axis0 >= slice.axis1) {
    throw ArgumentError("slice axes must satisfy 0 <= axis0 < axis1 < n");
  }
  Vec pinned = slice.pinned.size() == 0 ? Vec(Vec::Zero(n)) : slice.pinned;
  if (pinned.size() != n) {
    throw ArgumentError("pinned template must have state dimension");
  }

  ValueGrid grid;
  grid.lower = {omega.lower[slice.axis0], omega.lower[slice.axis1]};
  grid.upper = {omega.upper[slice.axis0], omega.upper[slice.axis1]};
  grid.resolution = {resolution0, resolution1};
  grid.state_axes = {slice.axis0, slice.axis1};
  for (int d = 0; d < n; ++d) {
    if (d != slice.axis0 && d != slice.axis1) grid.pins.emplace_back(d, pinned[d]);
  }
  const std::size_t count =
      static_cast<std::size_t>(resolution0) * resolution1;
  grid.values.assign(count, 0.0);

  parallel_chunks(count, [&](std::size_t, std::size_t b, std::size_t e) {
    Mat X(n, e - b);
    for (std::size_t node = b; node < e; ++node) {
      const int i0 = static_cast<int>(node / resolution1);
      const int i1 = static_cast<int>(node % resolution1);
      Vec x = pinned;
      x[slice.axis0] = grid.coord(0, i0);
      x[slice.axis1] = grid.coord(1, i1);
      X.col(node - b) = x;
    }
    const RowVec v = forward_batch(params, X);
    for (std::size_t node = b; node < e; ++node) {
      grid.values[node] = std::clamp(v(node - b), 0.0, 1.0);
    }
  });
  return grid;
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write history: " + path);
  os << "iter,epoch,total,boundary,residual,data\n";
  char buf[128];
  for (const EpochRecord& r : history.epochs) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                  r.iteration, r.epoch, r.total, r.boundary, r.residual, r.data);
    os << buf;
  }
  if (!os) throw IoError("failed while writing history: " + path);
}

}  // namespace zubov
