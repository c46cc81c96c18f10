#include <doctest.h>

#include "zubov/errors.hpp"
#include "zubov/net.hpp"
#include "zubov/rng.hpp"

#include "support/test_util.hpp"

#include <cmath>
#include <sstream>

using namespace zubov;

TEST_CASE("init_params is deterministic and shaped per the architecture") {
  const MlpParams a = init_params(3, 2, 50, 5);
  const MlpParams b = init_params(3, 2, 50, 5);
  REQUIRE(a.weights.size() == 5);
  CHECK(a.weights[0].rows() == 50);
  CHECK(a.weights[0].cols() == 2);
  CHECK(a.weights[4].rows() == 1);
  CHECK(a.weights[4].cols() == 50);
  for (int l = 0; l < 5; ++l) {
    CHECK(testutil::bits_equal(a.weights[l], b.weights[l]));
    CHECK(a.biases[l].cwiseAbs().maxCoeff() == 0.0);
  }
  const MlpParams c = init_params(4, 2, 50, 5);
  CHECK(!testutil::bits_equal(a.weights[0], c.weights[0]));

  // Glorot bounds per layer
  for (int l = 0; l < 5; ++l) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(a.weights[l].rows() + a.weights[l].cols()));
    CHECK(a.weights[l].cwiseAbs().maxCoeff() <= limit);
  }

  CHECK_THROWS_AS(init_params(1, 2, 8, 1), ArgumentError);
}

TEST_CASE("forward collapses to the output bias for zero weights") {
  MlpParams p = init_params(1, 3, 8, 4);
  for (auto& w : p.weights) w.setZero();
  p.biases.back()(0) = 0.37;
  CHECK(forward(p, (Vec(3) << 0.4, -2.0, 1.0).finished()) == 0.37);
  CHECK(forward(p, Vec::Zero(3)) == 0.37);
}

TEST_CASE("forward hand evaluation of a one-hidden-layer net") {
  // W1 = 0, b1 = 0, W2 = row of ones, b2 = 0, width 4: output 4 * sigmoid(0).
  MlpParams p;
  p.input_dim = 2;
  p.width = 4;
  p.depth = 2;
  p.weights = {Mat::Zero(4, 2), Mat::Ones(1, 4)};
  p.biases = {Vec::Zero(4), Vec::Zero(1)};
  CHECK(forward(p, (Vec(2) << 5.0, -1.0).finished()) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("forward is pure and batch evaluation agrees with single points") {
  const MlpParams p = init_params(9, 3, 6, 3);
  Xoshiro256PlusPlus rng(17);
  Mat X(3, 33);
  for (int i = 0; i < X.size(); ++i) X(i / 33, i % 33) = rng.uniform(-2, 2);
  const RowVec batch = forward_batch(p, X);
  for (int i = 0; i < X.cols(); ++i) {
    const double v = forward(p, X.col(i));
    CHECK(v == forward(p, X.col(i)));
    CHECK(batch(i) == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK_THROWS_AS(forward(p, Vec::Zero(2)), ArgumentError);
}

TEST_CASE("adam: zero gradient is a fixed point that still advances t") {
  MlpParams p = init_params(5, 2, 4, 3);
  const MlpParams before = p;
  AdamState state = AdamState::fresh(p);
  adam_step(state, p, ParamGrad::zeros_like(p));
  CHECK(state.t == 1);
  CHECK(testutil::params_equal(p, before));
}

TEST_CASE("adam: first step moves by about lr in the gradient sign") {
  MlpParams p = init_params(5, 2, 4, 3);
  const MlpParams before = p;
  AdamState state = AdamState::fresh(p, 0.001);
  ParamGrad g = ParamGrad::zeros_like(p);
  for (auto& w : g.weights) w.setConstant(3.5);
  for (auto& b : g.biases) b.setConstant(-1.25);
  adam_step(state, p, g);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const Mat dw = p.weights[l] - before.weights[l];
    // bias-corrected first step: lr * c / (|c| + eps) ~ lr * sign(c)
    CHECK(dw.maxCoeff() == doctest::Approx(-0.001).epsilon(1e-6));
    CHECK(dw.minCoeff() == doctest::Approx(-0.001).epsilon(1e-6));
    const Vec db = p.biases[l] - before.biases[l];
    CHECK(db.maxCoeff() == doctest::Approx(0.001).epsilon(1e-6));
  }
}

TEST_CASE("adam rejects non-finite gradients naming the layer") {
  MlpParams p = init_params(5, 2, 4, 3);
  AdamState state = AdamState::fresh(p);
  ParamGrad g = ParamGrad::zeros_like(p);
  g.weights[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    adam_step(state, p, g);
    FAIL("expected NumericError");
  } catch (const NumericError& err) {
    CHECK(std::string(err.what()).find("layer 2") != std::string::npos);
  }
}

TEST_CASE("identical updates give identical trajectories") {
  MlpParams p1 = init_params(8, 2, 5, 3);
  MlpParams p2 = init_params(8, 2, 5, 3);
  AdamState s1 = AdamState::fresh(p1), s2 = AdamState::fresh(p2);
  Xoshiro256PlusPlus rng(3);
  for (int step = 0; step < 5; ++step) {
    ParamGrad g = ParamGrad::zeros_like(p1);
    for (auto& w : g.weights) {
      for (int i = 0; i < w.size(); ++i) w(i / w.cols(), i % w.cols()) = rng.uniform(-1, 1);
    }
    adam_step(s1, p1, g);
    adam_step(s2, p2, g);
  }
  CHECK(testutil::params_equal(p1, p2));
}

TEST_CASE("checkpoint round-trips are value-exact") {
  MlpParams p = init_params(21, 3, 7, 4);
  Xoshiro256PlusPlus rng(2);
  for (auto& b : p.biases) {
    for (int i = 0; i < b.size(); ++i) b[i] = rng.uniform(-2, 2);
  }
  std::stringstream ss;
  write_checkpoint(p, ss);
  const MlpParams q = read_checkpoint(ss);
  CHECK(q.input_dim == p.input_dim);
  CHECK(q.width == p.width);
  CHECK(q.depth == p.depth);
  CHECK(testutil::params_equal(q, p));
}

TEST_CASE("checkpoint reader rejects malformed headers") {
  std::stringstream ss("zubov-ckpt 2\ndims 2 4 3\n");
  CHECK_THROWS_AS(read_checkpoint(ss), ParseError);
  std::stringstream ss2("bogus\n");
  CHECK_THROWS_AS(read_checkpoint(ss2), ParseError);
}
