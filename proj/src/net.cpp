#include "zubov/net.hpp"

#include "zubov/errors.hpp"
#include "zubov/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zubov {

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Mat sigmoid(Mat z) {
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

// sigma' and sigma'' expressed through the activation a = sigma(z).
inline Mat sig_d1(const Mat& a) {
  return (a.array() * (1.0 - a.array())).matrix();
}
inline Mat sig_d2(const Mat& a) {
  return (a.array() * (1.0 - a.array()) * (1.0 - 2.0 * a.array())).matrix();
}

void check_input_dim(const MlpParams& params, Eigen::Index dim) {
  if (dim != params.input_dim) {
    throw ArgumentError("network input has dim " + std::to_string(dim) +
                        ", expected " + std::to_string(params.input_dim));
  }
}

}  // namespace

void MlpParams::validate() const {
  if (depth < 2) throw ArgumentError("network depth must be >= 2");
  if (input_dim < 1 || width < 1) {
    throw ArgumentError("network needs input_dim >= 1 and width >= 1");
  }
  if (static_cast<int>(weights.size()) != depth ||
      static_cast<int>(biases.size()) != depth) {
    throw ArgumentError("network has wrong layer count");
  }
  for (int l = 0; l < depth; ++l) {
    const int rows = l == depth - 1 ? 1 : width;
    const int cols = l == 0 ? input_dim : width;
    if (weights[l].rows() != rows || weights[l].cols() != cols ||
        biases[l].size() != rows) {
      throw ArgumentError("layer " + std::to_string(l + 1) + " has wrong shape");
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) {
      throw NumericError("layer " + std::to_string(l + 1) +
                         " contains non-finite parameters");
    }
  }
}

bool MlpParams::same_shape(const MlpParams& other) const {
  return input_dim == other.input_dim && width == other.width &&
         depth == other.depth;
}

ParamGrad ParamGrad::zeros_like(const MlpParams& params) {
  ParamGrad g;
  g.weights.reserve(params.weights.size());
  g.biases.reserve(params.biases.size());
  for (const auto& w : params.weights) g.weights.push_back(Mat::Zero(w.rows(), w.cols()));
  for (const auto& b : params.biases) g.biases.push_back(Vec::Zero(b.size()));
  return g;
}

void ParamGrad::add(const ParamGrad& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    biases[l] += other.biases[l];
  }
}

void ParamGrad::setZero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

bool ParamGrad::all_finite(std::string* where) const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite()) {
      if (where) *where = "layer " + std::to_string(l + 1) + " weights";
      return false;
    }
    if (!biases[l].allFinite()) {
      if (where) *where = "layer " + std::to_string(l + 1) + " bias";
      return false;
    }
  }
  return true;
}

AdamState AdamState::fresh(const MlpParams& params, double learning_rate) {
  AdamState s;
  s.m = ParamGrad::zeros_like(params);
  s.v = ParamGrad::zeros_like(params);
  s.t = 0;
  s.learning_rate = learning_rate;
  return s;
}

MlpParams init_params(std::uint64_t seed, int input_dim, int width, int depth) {
  if (depth < 2) {
    throw ArgumentError("depth must be >= 2 (one hidden layer plus the output)");
  }
  if (input_dim < 1 || width < 1) {
    throw ArgumentError("input_dim and width must be >= 1");
  }
  MlpParams p;
  p.input_dim = input_dim;
  p.width = width;
  p.depth = depth;
  Xoshiro256PlusPlus rng(seed);
  for (int l = 0; l < depth; ++l) {
    const int rows = l == depth - 1 ? 1 : width;
    const int cols = l == 0 ? input_dim : width;
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Mat w(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) w(r, c) = rng.uniform(-limit, limit);
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Vec::Zero(rows));
  }
  return p;
}

double forward(const MlpParams& params, const Vec& x) {
  check_input_dim(params, x.size());
  Vec a = x;
  for (int l = 0; l < params.depth - 1; ++l) {
    a = (params.weights[l] * a + params.biases[l])
            .unaryExpr([](double z) { return sigmoid(z); });
  }
  return (params.weights.back() * a)(0) + params.biases.back()(0);
}

DualEval forward_with_input_grad(const MlpParams& params, const Vec& x) {
  check_input_dim(params, x.size());
  std::vector<Vec> acts(params.depth - 1);
  Vec a = x;
  for (int l = 0; l < params.depth - 1; ++l) {
    a = (params.weights[l] * a + params.biases[l])
            .unaryExpr([](double z) { return sigmoid(z); });
    acts[l] = a;
  }
  DualEval out;
  out.value = (params.weights.back() * a)(0) + params.biases.back()(0);
  Vec g = params.weights.back().transpose();  // d v / d a_{L-1}
  for (int l = params.depth - 2; l >= 0; --l) {
    const Vec s = acts[l].array() * (1.0 - acts[l].array());
    g = params.weights[l].transpose() * Vec(s.cwiseProduct(g));
  }
  out.input_grad = std::move(g);
  return out;
}

RowVec forward_batch_cached(const MlpParams& params, const Mat& X,
                            BatchCache& cache) {
  check_input_dim(params, X.rows());
  cache.acts.resize(params.depth);
  cache.acts[0] = X;
  for (int l = 0; l < params.depth - 1; ++l) {
    cache.acts[l + 1] =
        sigmoid(Mat((params.weights[l] * cache.acts[l]).colwise() + params.biases[l]));
  }
  RowVec values = (params.weights.back() * cache.acts[params.depth - 1]).row(0);
  values.array() += params.biases.back()(0);
  return values;
}

RowVec forward_batch(const MlpParams& params, const Mat& X) {
  BatchCache cache;
  return forward_batch_cached(params, X, cache);
}

void forward_with_input_grad_batch(const MlpParams& params, const Mat& X,
                                   RowVec& values, Mat& input_grads) {
  BatchCache cache;
  values = forward_batch_cached(params, X, cache);
  const Eigen::Index m = X.cols();
  Mat g = params.weights.back().transpose().replicate(1, m);  // w x m
  for (int l = params.depth - 2; l >= 0; --l) {
    const Mat s = sig_d1(cache.acts[l + 1]);
    g = params.weights[l].transpose() * Mat(s.cwiseProduct(g));
  }
  input_grads = std::move(g);
}

void dual_forward_batch(const MlpParams& params, const Mat& X, const Mat& F,
                        DualBatchCache& cache, RowVec& values,
                        RowVec& dir_derivs) {
  check_input_dim(params, X.rows());
  if (F.rows() != X.rows() || F.cols() != X.cols()) {
    throw ArgumentError("direction block must match the input block shape");
  }
  cache.primal.acts.resize(params.depth);
  cache.dots.resize(params.depth);
  cache.primal.acts[0] = X;
  cache.dots[0] = F;
  for (int l = 0; l < params.depth - 1; ++l) {
    const Mat a = sigmoid(
        Mat((params.weights[l] * cache.primal.acts[l]).colwise() + params.biases[l]));
    cache.dots[l + 1] =
        sig_d1(a).cwiseProduct(params.weights[l] * cache.dots[l]);
    cache.primal.acts[l + 1] = a;
  }
  const int last = params.depth - 1;
  values = (params.weights.back() * cache.primal.acts[last]).row(0);
  values.array() += params.biases.back()(0);
  dir_derivs = (params.weights.back() * cache.dots[last]).row(0);
}

void backward_batch(const MlpParams& params, const BatchCache& cache,
                    const RowVec& value_seeds, ParamGrad& out) {
  const int last = params.depth - 1;
  out.weights[last] += value_seeds * cache.acts[last].transpose();
  out.biases[last](0) += value_seeds.sum();
  Mat abar = params.weights[last].transpose() * value_seeds;  // w x m
  for (int l = last - 1; l >= 0; --l) {
    const Mat zbar = sig_d1(cache.acts[l + 1]).cwiseProduct(abar);
    out.weights[l] += zbar * cache.acts[l].transpose();
    out.biases[l] += zbar.rowwise().sum();
    if (l > 0) abar = params.weights[l].transpose() * zbar;
  }
}

void dual_backward_batch(const MlpParams& params, const DualBatchCache& cache,
                         const RowVec& value_seeds, const RowVec& dual_seeds,
                         ParamGrad& out) {
  const int last = params.depth - 1;
  const auto& acts = cache.primal.acts;
  out.weights[last] +=
      value_seeds * acts[last].transpose() + dual_seeds * cache.dots[last].transpose();
  out.biases[last](0) += value_seeds.sum();
  Mat abar = params.weights[last].transpose() * value_seeds;
  Mat adotbar = params.weights[last].transpose() * dual_seeds;
  for (int l = last - 1; l >= 0; --l) {
    // z = W a_prev + b, zdot = W adot_prev, a = sigma(z), adot = sigma'(z).zdot
    const Mat s1 = sig_d1(acts[l + 1]);
    const Mat zdot = params.weights[l] * cache.dots[l];
    const Mat zbar =
        s1.cwiseProduct(abar) + sig_d2(acts[l + 1]).cwiseProduct(zdot).cwiseProduct(adotbar);
    const Mat zdotbar = s1.cwiseProduct(adotbar);
    out.weights[l] += zbar * acts[l].transpose() + zdotbar * cache.dots[l].transpose();
    out.biases[l] += zbar.rowwise().sum();
    if (l > 0) {
      abar = params.weights[l].transpose() * zbar;
      adotbar = params.weights[l].transpose() * zdotbar;
    }
  }
}

void adam_step(AdamState& state, MlpParams& params, const ParamGrad& grad) {
  std::string where;
  if (!grad.all_finite(&where)) {
    throw NumericError("non-finite gradient in " + where);
  }
  state.t += 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    auto update = [&](auto& m, auto& v, auto& theta, const auto& g) {
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
      theta -= (state.learning_rate * (m / c1).array() /
                ((v / c2).array().sqrt() + state.epsilon))
                   .matrix();
    };
    update(state.m.weights[l], state.v.weights[l], params.weights[l], grad.weights[l]);
    update(state.m.biases[l], state.v.biases[l], params.biases[l], grad.biases[l]);
  }
}

namespace {

void write_row(std::ostream& os, const double* data, Eigen::Index count) {
  char buf[32];
  for (Eigen::Index i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", data[i]);
    if (i) os << ' ';
    os << buf;
  }
  os << '\n';
}

}  // namespace

void write_checkpoint(const MlpParams& params, std::ostream& os) {
  os << "zubov-ckpt 1\n";
  os << "dims " << params.input_dim << ' ' << params.width << ' ' << params.depth
     << '\n';
  for (int l = 0; l < params.depth; ++l) {
    const Mat& w = params.weights[l];
    os << "layer " << l + 1 << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      Eigen::RowVectorXd row = w.row(r);
      write_row(os, row.data(), row.size());
    }
    write_row(os, params.biases[l].data(), params.biases[l].size());
  }
}

MlpParams read_checkpoint(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "zubov-ckpt" || version != 1) {
    throw ParseError("not a zubov-ckpt version 1 file");
  }
  std::string tag;
  MlpParams p;
  if (!(is >> tag >> p.input_dim >> p.width >> p.depth) || tag != "dims") {
    throw ParseError("checkpoint missing dims line");
  }
  if (p.depth < 2 || p.input_dim < 1 || p.width < 1) {
    throw ParseError("checkpoint has invalid dims");
  }
  for (int l = 0; l < p.depth; ++l) {
    int index = 0;
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> tag >> index >> rows >> cols) || tag != "layer" || index != l + 1) {
      throw ParseError("checkpoint missing layer " + std::to_string(l + 1));
    }
    Mat w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(is >> w(r, c))) throw ParseError("truncated weight block");
      }
    }
    Vec b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!(is >> b(r))) throw ParseError("truncated bias row");
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  p.validate();
  return p;
}

void save_checkpoint(const MlpParams& params, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write checkpoint: " + path);
  write_checkpoint(params, os);
  if (!os) throw IoError("failed while writing checkpoint: " + path);
}

MlpParams load_checkpoint(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read checkpoint: " + path);
  return read_checkpoint(is);
}

}  // namespace zubov
