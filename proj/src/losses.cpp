#include "zubov/losses.hpp"

#include "zubov/errors.hpp"
#include "zubov/parallel.hpp"
#include "zubov/reduce.hpp"

#include <cmath>
#include <utility>

namespace zubov {

LossBatch LossBatch::assemble(const PerturbedSystem& system, Mat boundary,
                              Mat residual, Mat deltas, Mat anchors,
                              Vec anchor_values, double alpha, double lambda_r,
                              double lambda_d) {
  LossBatch b;
  b.boundary_points = std::move(boundary);
  b.residual_points = std::move(residual);
  b.residual_deltas = std::move(deltas);
  b.anchor_points = std::move(anchors);
  b.anchor_values = std::move(anchor_values);
  b.alpha = alpha;
  b.lambda_r = lambda_r;
  b.lambda_d = lambda_d;

  const Eigen::Index mr = b.residual_points.cols();
  if (b.residual_deltas.cols() != mr) {
    throw ArgumentError("residual points and disturbances differ in count");
  }
  b.residual_dirs.resize(system.state_dim, mr);
  b.residual_costs.resize(mr);
  for (Eigen::Index i = 0; i < mr; ++i) {
    const Vec x = b.residual_points.col(i);
    const Vec d = b.residual_deltas.col(i);
    if (!system.disturbance.contains(d)) {
      throw ArgumentError("residual disturbance " + std::to_string(i) +
                          " lies outside the box");
    }
    b.residual_dirs.col(i) = system.rhs(x, d);
    b.residual_costs[i] = system.running_cost(x, d);
  }
  b.validate(system.state_dim);
  return b;
}

void LossBatch::validate(int state_dim) const {
  auto check_dim = [&](const Mat& m, const char* what) {
    if (m.cols() > 0 && m.rows() != state_dim) {
      throw ArgumentError(std::string(what) + " block has wrong state dim");
    }
  };
  check_dim(boundary_points, "boundary");
  check_dim(residual_points, "residual");
  check_dim(anchor_points, "anchor");
  if (residual_dirs.cols() != residual_points.cols() ||
      residual_costs.size() != residual_points.cols()) {
    throw ArgumentError("residual block is missing precomputed f/g columns");
  }
  if (anchor_values.size() != anchor_points.cols()) {
    throw ArgumentError("anchor points and values differ in count");
  }
  for (Eigen::Index i = 0; i < anchor_values.size(); ++i) {
    if (!(anchor_values[i] >= 0.0 && anchor_values[i] <= 1.0)) {
      throw ArgumentError("anchor value " + std::to_string(i) +
                          " outside [0, 1]");
    }
  }
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (lambda_r < 0.0 || lambda_d < 0.0) {
    throw ArgumentError("loss weights must be nonnegative");
  }
  if (lambda_r > 0.0 && residual_points.cols() == 0) {
    throw ArgumentError("lambda_r > 0 needs residual points");
  }
  if (lambda_d > 0.0 && anchor_points.cols() == 0) {
    throw ArgumentError("lambda_d > 0 needs anchor points");
  }
}

double boundary_loss_from_values(double v_origin,
                                 std::vector<double> boundary_values) {
  for (double& v : boundary_values) v = (v - 1.0) * (v - 1.0);
  const double sample_mean = boundary_values.empty()
                                 ? 0.0
                                 : sorted_pairwise_mean(std::move(boundary_values));
  return v_origin * v_origin + sample_mean;
}

double residual_term(double value, const Vec& input_grad, const Vec& f,
                     double g, double alpha) {
  return input_grad.dot(f) + alpha * (1.0 - value) * g;
}

namespace {

// Shared engine for loss values and the parameter gradient. All per-point
// work runs over fixed-width column chunks; per-chunk gradients are combined
// in chunk order afterwards.
LossGradient evaluate(const MlpParams& params, const LossBatch& batch,
                      bool with_grad) {
  params.validate();
  batch.validate(params.input_dim);

  const Eigen::Index mb = batch.boundary_points.cols();
  const Eigen::Index mr = batch.residual_points.cols();
  const Eigen::Index md = batch.anchor_points.cols();

  LossGradient out;
  if (with_grad) out.grad = ParamGrad::zeros_like(params);

  // Origin term of the boundary loss, evaluated through the same batched path
  // as everything else.
  {
    const Mat origin = Mat::Zero(params.input_dim, 1);
    BatchCache cache;
    const RowVec v = forward_batch_cached(params, origin, cache);
    out.terms.boundary = v(0) * v(0);
    if (with_grad) {
      RowVec seed(1);
      seed(0) = 2.0 * v(0);
      backward_batch(params, cache, seed, out.grad);
    }
  }

  auto combine = [&](std::vector<ParamGrad>& chunks) {
    for (auto& g : chunks) out.grad.add(g);
  };

  if (mb > 0) {
    std::vector<double> values(mb);
    std::vector<ParamGrad> chunks(with_grad ? chunk_count(mb) : 0);
    parallel_chunks(mb, [&](std::size_t c, std::size_t b, std::size_t e) {
      const Mat X = batch.boundary_points.middleCols(b, e - b);
      BatchCache cache;
      const RowVec v = forward_batch_cached(params, X, cache);
      for (Eigen::Index i = 0; i < v.size(); ++i) values[b + i] = v(i);
      if (with_grad) {
        const RowVec seeds =
            (2.0 / static_cast<double>(mb)) * (v.array() - 1.0).matrix();
        chunks[c] = ParamGrad::zeros_like(params);
        backward_batch(params, cache, seeds, chunks[c]);
      }
    });
    std::vector<double> terms(mb);
    for (Eigen::Index i = 0; i < mb; ++i) {
      terms[i] = (values[i] - 1.0) * (values[i] - 1.0);
    }
    out.terms.boundary += sorted_pairwise_mean(std::move(terms));
    if (with_grad) combine(chunks);
  }

  if (mr > 0) {
    std::vector<double> terms(mr);
    const bool grad_pass = with_grad && batch.lambda_r > 0.0;
    std::vector<ParamGrad> chunks(grad_pass ? chunk_count(mr) : 0);
    parallel_chunks(mr, [&](std::size_t c, std::size_t b, std::size_t e) {
      const Mat X = batch.residual_points.middleCols(b, e - b);
      const Mat F = batch.residual_dirs.middleCols(b, e - b);
      DualBatchCache cache;
      RowVec v, u;
      dual_forward_batch(params, X, F, cache, v, u);
      RowVec r(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double g = batch.residual_costs[b + i];
        r(i) = u(i) + batch.alpha * (1.0 - v(i)) * g;
        terms[b + i] = r(i) * r(i);
      }
      if (grad_pass) {
        const double scale = 2.0 * batch.lambda_r / static_cast<double>(mr);
        RowVec value_seeds(v.size()), dual_seeds(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          dual_seeds(i) = scale * r(i);
          value_seeds(i) = -scale * r(i) * batch.alpha * batch.residual_costs[b + i];
        }
        chunks[c] = ParamGrad::zeros_like(params);
        dual_backward_batch(params, cache, value_seeds, dual_seeds, chunks[c]);
      }
    });
    out.terms.residual = sorted_pairwise_mean(std::move(terms));
    if (grad_pass) combine(chunks);
  }

  if (md > 0) {
    std::vector<double> terms(md);
    const bool grad_pass = with_grad && batch.lambda_d > 0.0;
    std::vector<ParamGrad> chunks(grad_pass ? chunk_count(md) : 0);
    parallel_chunks(md, [&](std::size_t c, std::size_t b, std::size_t e) {
      const Mat X = batch.anchor_points.middleCols(b, e - b);
      BatchCache cache;
      const RowVec v = forward_batch_cached(params, X, cache);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double diff = v(i) - batch.anchor_values[b + i];
        terms[b + i] = diff * diff;
      }
      if (grad_pass) {
        const double scale = 2.0 * batch.lambda_d / static_cast<double>(md);
        RowVec seeds(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          seeds(i) = scale * (v(i) - batch.anchor_values[b + i]);
        }
        chunks[c] = ParamGrad::zeros_like(params);
        backward_batch(params, cache, seeds, chunks[c]);
      }
    });
    out.terms.data = sorted_pairwise_mean(std::move(terms));
    if (grad_pass) combine(chunks);
  }

  out.terms.total = out.terms.boundary + batch.lambda_r * out.terms.residual +
                    batch.lambda_d * out.terms.data;
  return out;
}

LossBatch single_block_batch(int state_dim) {
  LossBatch b;
  b.boundary_points.resize(state_dim, 0);
  b.residual_points.resize(state_dim, 0);
  b.residual_deltas.resize(0, 0);
  b.residual_dirs.resize(state_dim, 0);
  b.residual_costs.resize(0);
  b.anchor_points.resize(state_dim, 0);
  b.anchor_values.resize(0);
  b.lambda_r = 0.0;
  b.lambda_d = 0.0;
  return b;
}

}  // namespace

LossTerms loss_terms(const MlpParams& params, const LossBatch& batch) {
  return evaluate(params, batch, /*with_grad=*/false).terms;
}

double total_loss(const MlpParams& params, const LossBatch& batch) {
  return loss_terms(params, batch).total;
}

LossGradient loss_gradient(const MlpParams& params, const LossBatch& batch) {
  return evaluate(params, batch, /*with_grad=*/true);
}

double boundary_loss(const MlpParams& params, const Mat& boundary_points) {
  if (boundary_points.cols() == 0) {
    throw ArgumentError("boundary loss needs at least one sample");
  }
  LossBatch b = single_block_batch(params.input_dim);
  b.boundary_points = boundary_points;
  return loss_terms(params, b).boundary;
}

double residual_loss(const MlpParams& params, const Mat& points,
                     const Mat& deltas, double alpha,
                     const PerturbedSystem& system) {
  if (points.cols() == 0) {
    throw ArgumentError("residual loss needs at least one sample");
  }
  LossBatch b = LossBatch::assemble(system, Mat(params.input_dim, 0), points,
                                    deltas, Mat(params.input_dim, 0), Vec(),
                                    alpha, /*lambda_r=*/0.0, /*lambda_d=*/0.0);
  return loss_terms(params, b).residual;
}

double data_loss(const MlpParams& params, const Mat& points, const Vec& values) {
  if (points.cols() == 0) {
    throw ArgumentError("data loss needs at least one sample");
  }
  LossBatch b = single_block_batch(params.input_dim);
  b.anchor_points = points;
  b.anchor_values = values;
  return loss_terms(params, b).data;
}

}  // namespace zubov
