#include "zubov/gradcheck.hpp"

#include "zubov/dynamics.hpp"
#include "zubov/losses.hpp"
#include "zubov/net.hpp"
#include "zubov/rng.hpp"

#include <algorithm>
#include <cmath>

namespace zubov {

namespace {

double rel_err(double max_abs_diff, double scale_a, double scale_b) {
  return max_abs_diff / std::max({scale_a, scale_b, 1e-12});
}

MlpParams random_params(Xoshiro256PlusPlus& rng, int n, int w, int L) {
  MlpParams p = init_params(rng.next(), n, w, L);
  // Nonzero biases so the bias gradients are exercised away from zero.
  for (auto& b : p.biases) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-0.5, 0.5);
  }
  return p;
}

double input_grad_case(Xoshiro256PlusPlus& rng) {
  const int n = 1 + static_cast<int>(rng.next() % 4);
  const int w = 2 + static_cast<int>(rng.next() % 5);
  const int L = 2 + static_cast<int>(rng.next() % 3);
  const MlpParams params = random_params(rng, n, w, L);
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(-2.0, 2.0);

  const DualEval eval = forward_with_input_grad(params, x);
  const double h = 1e-5;
  double max_diff = 0.0, scale_fd = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (forward(params, xp) - forward(params, xm)) / (2.0 * h);
    max_diff = std::max(max_diff, std::abs(eval.input_grad[i] - fd));
    scale_fd = std::max(scale_fd, std::abs(fd));
  }
  return rel_err(max_diff, eval.input_grad.cwiseAbs().maxCoeff(), scale_fd);
}

double param_grad_case(Xoshiro256PlusPlus& rng) {
  const PerturbedSystem system =
      rng.next() % 2 == 0 ? make_van_der_pol() : make_product_system(2);
  const int n = system.state_dim;
  const int w = 3 + static_cast<int>(rng.next() % 3);
  const int L = 2 + static_cast<int>(rng.next() % 2);
  MlpParams params = random_params(rng, n, w, L);

  const Domain omega = system.default_domain;
  auto sample_point = [&] {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(omega.lower[i], omega.upper[i]);
    return x;
  };

  const int mb = 2 + static_cast<int>(rng.next() % 3);
  const int mr = 2 + static_cast<int>(rng.next() % 3);
  const int md = 2 + static_cast<int>(rng.next() % 3);
  Mat boundary(n, mb), residual(n, mr), anchors(n, md);
  for (int i = 0; i < mb; ++i) boundary.col(i) = sample_point();
  for (int i = 0; i < mr; ++i) residual.col(i) = sample_point();
  for (int i = 0; i < md; ++i) anchors.col(i) = sample_point();
  Mat deltas(system.dist_dim, mr);
  for (int i = 0; i < mr; ++i) {
    for (int j = 0; j < system.dist_dim; ++j) {
      deltas(j, i) = rng.uniform(system.disturbance.lower[j],
                                 system.disturbance.upper[j]);
    }
  }
  Vec targets(md);
  for (int i = 0; i < md; ++i) targets[i] = rng.uniform01();

  const double alpha = 0.25 + rng.uniform01();
  const double lambda_r = 0.5 + rng.uniform01();  // keep the 2nd-order path hot
  const double lambda_d = rng.uniform01() * 10.0;
  const LossBatch batch =
      LossBatch::assemble(system, boundary, residual, deltas, anchors, targets,
                          alpha, lambda_r, lambda_d);

  const ParamGrad analytic = loss_gradient(params, batch).grad;

  const double h = 1e-6;
  double max_diff = 0.0, scale_a = 0.0, scale_fd = 0.0;
  auto probe = [&](double& slot, double analytic_entry) {
    const double saved = slot;
    slot = saved + h;
    const double up = total_loss(params, batch);
    slot = saved - h;
    const double down = total_loss(params, batch);
    slot = saved;
    const double fd = (up - down) / (2.0 * h);
    max_diff = std::max(max_diff, std::abs(analytic_entry - fd));
    scale_a = std::max(scale_a, std::abs(analytic_entry));
    scale_fd = std::max(scale_fd, std::abs(fd));
  };
  for (int l = 0; l < params.depth; ++l) {
    Mat& W = params.weights[l];
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) {
        probe(W(r, c), analytic.weights[l](r, c));
      }
    }
    Vec& b = params.biases[l];
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      probe(b[r], analytic.biases[l][r]);
    }
  }
  return rel_err(max_diff, scale_a, scale_fd);
}

}  // namespace

GradCheckReport run_gradcheck(std::uint64_t seed, int input_cases,
                              int param_cases) {
  GradCheckReport report;
  report.input_cases = input_cases;
  report.param_cases = param_cases;
  Xoshiro256PlusPlus rng(seed);
  for (int c = 0; c < input_cases; ++c) {
    report.max_input_grad_rel_err =
        std::max(report.max_input_grad_rel_err, input_grad_case(rng));
  }
  for (int c = 0; c < param_cases; ++c) {
    report.max_param_grad_rel_err =
        std::max(report.max_param_grad_rel_err, param_grad_case(rng));
  }
  return report;
}

}  // namespace zubov
