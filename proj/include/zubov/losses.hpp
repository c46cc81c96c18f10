#pragma once

#include "zubov/dynamics.hpp"
#include "zubov/net.hpp"

#include <vector>

namespace zubov {

/// One policy-evaluation batch: boundary samples, residual samples with their
/// frozen worst-case disturbances (and the precomputed f and g at those
/// pairs), anchor samples with rollout value labels, and the loss weights.
///
/// The origin term of the boundary loss is always present, so a batch with an
/// empty boundary block is legal. A batch is rejected when a term with a
/// nonzero weight has no points to act on.
struct LossBatch {
  Mat boundary_points;  // n x M_b, zero columns allowed
  Mat residual_points;  // n x M_r
  Mat residual_deltas;  // m x M_r, column i holds delta*_i
  Mat residual_dirs;    // n x M_r, column i holds f(x_i, delta*_i)
  Vec residual_costs;   // M_r, entry i holds g(x_i, delta*_i)
  Mat anchor_points;    // n x M_d
  Vec anchor_values;    // M_d, entries in [0, 1]
  double alpha = 0.5;
  double lambda_r = 1.0;
  double lambda_d = 10.0;

  /// Fills residual_dirs/residual_costs from the system and validates
  /// everything (deltas inside the box, anchor values in range, shapes).
  static LossBatch assemble(const PerturbedSystem& system, Mat boundary,
                            Mat residual, Mat deltas, Mat anchors,
                            Vec anchor_values, double alpha, double lambda_r,
                            double lambda_d);

  void validate(int state_dim) const;
};

struct LossTerms {
  double total = 0.0;
  double boundary = 0.0;  // origin term included
  double residual = 0.0;  // unweighted mean square
  double data = 0.0;      // unweighted mean square
};

/// total = boundary + lambda_r * residual + lambda_d * data.
LossTerms loss_terms(const MlpParams& params, const LossBatch& batch);
double total_loss(const MlpParams& params, const LossBatch& batch);

double boundary_loss(const MlpParams& params, const Mat& boundary_points);
double residual_loss(const MlpParams& params, const Mat& points,
                     const Mat& deltas, double alpha,
                     const PerturbedSystem& system);
double data_loss(const MlpParams& params, const Mat& points, const Vec& values);

/// [v(0)]^2 plus the mean squared deviation from 1; the assembly step behind
/// boundary_loss, expressed on plain values.
double boundary_loss_from_values(double v_origin,
                                 std::vector<double> boundary_values);

/// The unsquared pointwise residual  grad_v . f + alpha (1 - v) g.
double residual_term(double value, const Vec& input_grad, const Vec& f,
                     double g, double alpha);

struct LossGradient {
  ParamGrad grad;
  LossTerms terms;  // same values, same reduction order as loss_terms
};

/// Exact parameter gradient of the composite loss, including the mixed
/// second-order path through grad_x v inside the residual term. Per-point
/// work runs in fixed-size chunks combined in chunk order, so the result is
/// independent of the worker-thread count.
LossGradient loss_gradient(const MlpParams& params, const LossBatch& batch);

}  // namespace zubov
