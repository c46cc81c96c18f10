#include "zubov/rollout.hpp"

#include "zubov/errors.hpp"
#include "zubov/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace zubov {

double RolloutParams::resolved_r_max(const Domain& omega) const {
  return r_max > 0.0 ? r_max : 2.0 * omega.max_radius();
}

double RolloutParams::resolved_v_cap(double alpha) const {
  return v_cap > 0.0 ? v_cap : 20.0 / alpha;
}

void RolloutParams::validate() const {
  if (k_steps < 1) throw ArgumentError("rollout needs k_steps >= 1");
  if (!(dt > 0.0)) throw ArgumentError("rollout needs dt > 0");
}

double hamiltonian(const MlpParams& params, const PerturbedSystem& system,
                   const Vec& x, const Vec& delta, double alpha) {
  const DualEval eval = forward_with_input_grad(params, x);
  return eval.input_grad.dot(system.rhs(x, delta)) +
         alpha * (1.0 - eval.value) * system.running_cost(x, delta);
}

Vec optimal_disturbance_from_grad(const Vec& input_grad,
                                  const PerturbedSystem& system, const Vec& x) {
  const int m = system.dist_dim;
  Vec delta(m);
  for (int j = 0; j < m; ++j) {
    const double c = input_grad.dot(system.channels[j](x));
    delta[j] = c < 0.0 ? system.disturbance.lower[j] : system.disturbance.upper[j];
  }
  return delta;
}

Vec optimal_disturbance(const MlpParams& params, const PerturbedSystem& system,
                        const Vec& x, double alpha) {
  (void)alpha;  // the cost term is delta-independent and cannot move the argmax
  if (!x.allFinite()) throw ArgumentError("state must be finite");
  const DualEval eval = forward_with_input_grad(params, x);
  if (!eval.input_grad.allFinite()) {
    std::ostringstream oss;
    oss << "non-finite network gradient at x = [" << x.transpose() << "]";
    throw NumericError(oss.str());
  }
  return optimal_disturbance_from_grad(eval.input_grad, system, x);
}

DisturbanceAssignment assign_disturbances(const MlpParams& params,
                                          const PerturbedSystem& system,
                                          const Mat& points, double alpha) {
  (void)alpha;
  params.validate();
  DisturbanceAssignment out;
  out.points = points;
  out.delta_star.resize(system.dist_dim, points.cols());
  parallel_chunks(points.cols(), [&](std::size_t, std::size_t b, std::size_t e) {
    const Mat X = points.middleCols(b, e - b);
    RowVec values;
    Mat grads;
    forward_with_input_grad_batch(params, X, values, grads);
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
      out.delta_star.col(b + i) =
          optimal_disturbance_from_grad(grads.col(i), system, X.col(i));
    }
  });
  return out;
}

Vec euler_step(const PerturbedSystem& system, const Vec& x, const Vec& delta,
               double dt) {
  return x + dt * system.rhs(x, delta);
}

RolloutResult rollout_value(const MlpParams& params,
                            const PerturbedSystem& system, const Vec& x0,
                            int k_steps, double dt, double alpha, double r_max,
                            double v_cap, bool keep_trace) {
  if (k_steps < 1) throw ArgumentError("rollout needs k_steps >= 1");
  if (!(dt > 0.0)) throw ArgumentError("rollout needs dt > 0");

  RolloutResult res;
  Vec x = x0;
  if (keep_trace) res.trace.states.push_back(x);
  if (!x.allFinite() || x.norm() > r_max) {
    res.diverged = true;
    res.V_hat = v_cap;
    return res;
  }

  double value = 0.0;
  for (int k = 0; k <= k_steps; ++k) {
    const DualEval eval = forward_with_input_grad(params, x);
    const Vec delta = optimal_disturbance_from_grad(eval.input_grad, system, x);
    value += system.running_cost(x, delta) * dt;
    if (value >= v_cap) {
      res.diverged = true;
      res.V_hat = v_cap;
      return res;
    }
    if (k == k_steps) break;
    try {
      x = euler_step(system, x, delta, dt);
    } catch (const NumericError&) {
      res.diverged = true;
      res.V_hat = v_cap;
      return res;
    }
    if (keep_trace) {
      res.trace.deltas.push_back(delta);
      res.trace.states.push_back(x);
    }
    if (!x.allFinite() || x.norm() > r_max) {
      res.diverged = true;
      res.V_hat = v_cap;
      return res;
    }
  }
  res.V_hat = value;
  return res;
}

double kruzkov_transform(double V, double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (V < 0.0) throw ArgumentError("value integral must be nonnegative");
  return -std::expm1(-alpha * V);
}

AnchorSet build_anchor_set(const MlpParams& params,
                           const PerturbedSystem& system, const Mat& points,
                           double alpha, const RolloutParams& rollout,
                           const Domain& omega) {
  params.validate();
  rollout.validate();
  if (!(alpha > 0.0)) throw ArgumentError("alpha must be positive");
  const double r_max = rollout.resolved_r_max(omega);
  const double v_cap = rollout.resolved_v_cap(alpha);
  const Eigen::Index count = points.cols();

  AnchorSet out;
  out.points = points;
  out.v_hat.resize(count);
  out.V_hat.resize(count);
  out.diverged.assign(count, false);

  parallel_chunks(count, [&](std::size_t, std::size_t b, std::size_t e) {
    const Eigen::Index len = static_cast<Eigen::Index>(e - b);
    Mat X = points.middleCols(b, len);
    std::vector<char> active(len, 1);
    std::vector<double> value(len, 0.0);

    for (Eigen::Index i = 0; i < len; ++i) {
      if (!X.col(i).allFinite() || X.col(i).norm() > r_max) {
        active[i] = 0;
        out.diverged[b + i] = true;
        value[i] = v_cap;
      }
    }

    RowVec values;
    Mat grads;
    for (int k = 0; k <= rollout.k_steps; ++k) {
      forward_with_input_grad_batch(params, X, values, grads);
      for (Eigen::Index i = 0; i < len; ++i) {
        if (!active[i]) continue;
        const Vec x = X.col(i);
        const Vec delta = optimal_disturbance_from_grad(grads.col(i), system, x);
        value[i] += system.running_cost(x, delta) * rollout.dt;
        if (value[i] >= v_cap) {
          active[i] = 0;
          out.diverged[b + i] = true;
          value[i] = v_cap;
          continue;
        }
        if (k == rollout.k_steps) continue;
        Vec next;
        try {
          next = euler_step(system, x, delta, rollout.dt);
        } catch (const NumericError&) {
          next = Vec::Constant(x.size(), std::numeric_limits<double>::quiet_NaN());
        }
        if (!next.allFinite() || next.norm() > r_max) {
          active[i] = 0;
          out.diverged[b + i] = true;
          value[i] = v_cap;
          continue;
        }
        X.col(i) = next;
      }
    }

    for (Eigen::Index i = 0; i < len; ++i) {
      out.V_hat[b + i] = value[i];
      out.v_hat[b + i] =
          out.diverged[b + i] ? 1.0 : kruzkov_transform(value[i], alpha);
    }
  });
  return out;
}

}  // namespace zubov
