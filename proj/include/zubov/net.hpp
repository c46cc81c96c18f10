#pragma once

#include "zubov/dynamics.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace zubov {

/// Parameters of the value network: depth-1 sigmoid hidden layers of equal
/// width followed by an affine scalar output layer (no output activation).
struct MlpParams {
  int input_dim = 0;
  int width = 0;
  int depth = 0;  // total layer count L, hidden layers plus output
  std::vector<Mat> weights;
  std::vector<Vec> biases;

  void validate() const;
  bool same_shape(const MlpParams& other) const;
};

/// Network value and its exact gradient with respect to the input point.
struct DualEval {
  double value = 0.0;
  Vec input_grad;
};

/// Parameter-shaped tensor: gradients, Adam moments.
struct ParamGrad {
  std::vector<Mat> weights;
  std::vector<Vec> biases;

  static ParamGrad zeros_like(const MlpParams& params);
  void add(const ParamGrad& other);
  void setZero();
  /// False when any entry is non-finite; *where names the offending layer.
  bool all_finite(std::string* where = nullptr) const;
};

struct AdamState {
  ParamGrad m;
  ParamGrad v;
  long t = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState fresh(const MlpParams& params, double learning_rate = 1e-3);
};

/// Glorot-uniform weights (zero biases), drawn from the project generator so
/// the same seed reproduces bit-identical parameters everywhere.
MlpParams init_params(std::uint64_t seed, int input_dim, int width, int depth);

double forward(const MlpParams& params, const Vec& x);
DualEval forward_with_input_grad(const MlpParams& params, const Vec& x);

/// Batched evaluation; points are matrix columns.
RowVec forward_batch(const MlpParams& params, const Mat& X);
void forward_with_input_grad_batch(const MlpParams& params, const Mat& X,
                                   RowVec& values, Mat& input_grads);

/// One bias-corrected Adam update in place; increments state.t. Throws
/// NumericError naming the layer when the gradient is non-finite.
void adam_step(AdamState& state, MlpParams& params, const ParamGrad& grad);

// ---------------------------------------------------------------------------
// Low-level batched passes shared by the loss gradient. Hidden activations are
// cached as sigmoid outputs a; the derivatives reuse them via
// sigma' = a(1-a) and sigma'' = a(1-a)(1-2a).

/// acts[0] is the input block, acts[l] the activations after hidden layer l.
struct BatchCache {
  std::vector<Mat> acts;
};

/// Forward pass filling the cache; returns the value row.
RowVec forward_batch_cached(const MlpParams& params, const Mat& X,
                            BatchCache& cache);

/// Forward pass carrying a directional derivative: dots[l] = d acts[l] / d eps
/// for inputs moving along the columns of F. dir_derivs comes out as
/// grad_x v . f per column.
struct DualBatchCache {
  BatchCache primal;
  std::vector<Mat> dots;
};
void dual_forward_batch(const MlpParams& params, const Mat& X, const Mat& F,
                        DualBatchCache& cache, RowVec& values,
                        RowVec& dir_derivs);

/// Reverse sweep for sum_i value_seeds[i] * v(x_i); accumulates into out.
void backward_batch(const MlpParams& params, const BatchCache& cache,
                    const RowVec& value_seeds, ParamGrad& out);

/// Reverse sweep over the dual forward pass for
/// sum_i value_seeds[i] * v(x_i) + dual_seeds[i] * (grad v(x_i) . f_i),
/// including the second-order flow through the directional derivative.
void dual_backward_batch(const MlpParams& params, const DualBatchCache& cache,
                         const RowVec& value_seeds, const RowVec& dual_seeds,
                         ParamGrad& out);

// ---------------------------------------------------------------------------
// Checkpoint text format: line 1 "zubov-ckpt 1", line 2 "dims n w L", then per
// layer a "layer l rows cols" line, `rows` weight rows and one bias row, all
// 17-significant-digit decimals. Round-trips are value-exact.

void write_checkpoint(const MlpParams& params, std::ostream& os);
MlpParams read_checkpoint(std::istream& is);
void save_checkpoint(const MlpParams& params, const std::string& path);
MlpParams load_checkpoint(const std::string& path);

}  // namespace zubov
