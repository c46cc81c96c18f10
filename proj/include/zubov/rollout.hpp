#pragma once

#include "zubov/dynamics.hpp"
#include "zubov/net.hpp"

#include <cstdint>
#include <vector>

namespace zubov {

/// Rollout and divergence-guard knobs. Non-positive r_max/v_cap resolve to
/// the defaults: twice the max-radius of the sampling domain, and 20/alpha
/// (so a capped point transforms to 1 - e^-20).
struct RolloutParams {
  int k_steps = 500;
  double dt = 0.02;
  double r_max = 0.0;
  double v_cap = 0.0;

  double resolved_r_max(const Domain& omega) const;
  double resolved_v_cap(double alpha) const;
  void validate() const;
};

/// Worst-case disturbances frozen for a residual point set.
struct DisturbanceAssignment {
  Mat points;      // n x M
  Mat delta_star;  // m x M, every column a box vertex
};

/// Rollout-estimated value labels. diverged marks points whose trajectory
/// escaped |x| <= r_max, went non-finite, or whose running integral reached
/// v_cap; those carry V_hat = v_cap and v_hat = 1 exactly. (Byte flags, not
/// vector<bool>, so chunks can write them concurrently.)
struct AnchorSet {
  Mat points;  // n x M
  Vec v_hat;   // in [0, 1]
  Vec V_hat;   // nonnegative, capped at v_cap
  std::vector<std::uint8_t> diverged;
};

struct RolloutTrace {
  std::vector<Vec> states;  // x_0 .. x_k, k <= K (shorter when stopped early)
  std::vector<Vec> deltas;  // one per step taken, states.size() - 1 entries
};

struct RolloutResult {
  double V_hat = 0.0;
  bool diverged = false;
  RolloutTrace trace;
};

/// Hamiltonian  grad v(x) . f(x, delta) + alpha (1 - v(x)) g(x, delta).
double hamiltonian(const MlpParams& params, const PerturbedSystem& system,
                   const Vec& x, const Vec& delta, double alpha);

/// Bang-bang maximizer of the Hamiltonian over the disturbance box for
/// affine-in-delta dynamics with delta-independent cost: component j takes
/// the upper bound when grad v(x) . channels[j](x) > 0, the lower bound when
/// negative, and the upper bound on ties.
Vec optimal_disturbance(const MlpParams& params, const PerturbedSystem& system,
                        const Vec& x, double alpha);

/// Same vertex rule applied to a precomputed input gradient.
Vec optimal_disturbance_from_grad(const Vec& input_grad,
                                  const PerturbedSystem& system, const Vec& x);

/// Batched bang-bang assignment for a point block (used for residual points).
DisturbanceAssignment assign_disturbances(const MlpParams& params,
                                          const PerturbedSystem& system,
                                          const Mat& points, double alpha);

/// The Euler step shared by the rollout and its consistency checks.
Vec euler_step(const PerturbedSystem& system, const Vec& x, const Vec& delta,
               double dt);

/// Explicit-Euler worst-case rollout from x0; the disturbance is re-chosen
/// from the frozen network at every step, and the value integral sums
/// g(x_k) dt over all visited states including x_0. keep_trace=false skips
/// recording the trajectory.
RolloutResult rollout_value(const MlpParams& params,
                            const PerturbedSystem& system, const Vec& x0,
                            int k_steps, double dt, double alpha, double r_max,
                            double v_cap, bool keep_trace = true);

/// v = 1 - exp(-alpha V). Throws on V < 0; maps +infinity to exactly 1.
double kruzkov_transform(double V, double alpha);

/// Rollout + transform per anchor point, batched over network evaluations and
/// chunk-parallel over points; deterministic for fixed inputs regardless of
/// thread count.
AnchorSet build_anchor_set(const MlpParams& params,
                           const PerturbedSystem& system, const Mat& points,
                           double alpha, const RolloutParams& rollout,
                           const Domain& omega);

}  // namespace zubov
