#include "zubov/dynamics.hpp"

#include "zubov/errors.hpp"

#include <cmath>
#include <sstream>

namespace zubov {

bool DisturbanceBox::contains(const Vec& delta, double tol) const {
  if (delta.size() != lower.size()) return false;
  for (int j = 0; j < delta.size(); ++j) {
    if (delta[j] < lower[j] - tol || delta[j] > upper[j] + tol) return false;
  }
  return true;
}

std::vector<Vec> DisturbanceBox::vertices() const {
  const int m = dim();
  std::vector<Vec> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Vec v(m);
    for (int j = 0; j < m; ++j) v[j] = (mask >> j) & 1 ? upper[j] : lower[j];
    out.push_back(std::move(v));
  }
  return out;
}

void DisturbanceBox::validate() const {
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw ArgumentError("disturbance box needs matching lower/upper of dim >= 1");
  }
  for (int j = 0; j < lower.size(); ++j) {
    if (!(lower[j] <= upper[j])) {
      throw ArgumentError("disturbance box has lower > upper at component " +
                          std::to_string(j));
    }
  }
}

bool Domain::contains(const Vec& x) const {
  if (x.size() != lower.size()) return false;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

double Domain::max_radius() const {
  double sq = 0.0;
  for (int i = 0; i < lower.size(); ++i) {
    sq += std::pow(std::max(std::abs(lower[i]), std::abs(upper[i])), 2);
  }
  return std::sqrt(sq);
}

void Domain::validate() const {
  if (lower.size() != upper.size() || lower.size() < 1) {
    throw ArgumentError("domain needs matching lower/upper of dim >= 1");
  }
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw ArgumentError("domain has lower >= upper at axis " + std::to_string(i));
    }
    if (!(lower[i] < 0.0 && 0.0 < upper[i])) {
      throw ArgumentError("domain must contain the origin strictly, axis " +
                          std::to_string(i));
    }
  }
}

Vec PerturbedSystem::rhs(const Vec& x, const Vec& delta) const {
  if (x.size() != state_dim) {
    throw ArgumentError(name + ": state has dim " + std::to_string(x.size()) +
                        ", expected " + std::to_string(state_dim));
  }
  if (delta.size() != dist_dim) {
    throw ArgumentError(name + ": disturbance has dim " +
                        std::to_string(delta.size()) + ", expected " +
                        std::to_string(dist_dim));
  }
  Vec out = rhs_fn(x, delta);
  if (!out.allFinite()) {
    std::ostringstream oss;
    oss << name << ": non-finite rhs at x = [" << x.transpose() << "]";
    throw NumericError(oss.str());
  }
  return out;
}

double PerturbedSystem::running_cost(const Vec& x, const Vec& delta) const {
  return cost(x, delta);
}

namespace {

CostFn squared_norm_cost() {
  return [](const Vec& x, const Vec&) { return x.squaredNorm(); };
}

Domain box_domain(int n, double lo, double hi) {
  Domain d;
  d.lower = Vec::Constant(n, lo);
  d.upper = Vec::Constant(n, hi);
  return d;
}

}  // namespace

PerturbedSystem make_van_der_pol() {
  PerturbedSystem s;
  s.name = "vdp";
  s.state_dim = 2;
  s.dist_dim = 2;
  s.disturbance.lower = (Vec(2) << -0.3, -0.1).finished();
  s.disturbance.upper = (Vec(2) << 0.3, 0.1).finished();
  s.rhs_fn = [](const Vec& x, const Vec& d) {
    Vec out(2);
    out[0] = -x[1] + d[0] * x[0];
    out[1] = x[0] - (1.0 - x[0] * x[0]) * x[1] + d[1] * x[1];
    return out;
  };
  s.drift = [](const Vec& x) {
    Vec out(2);
    out[0] = -x[1];
    out[1] = x[0] - (1.0 - x[0] * x[0]) * x[1];
    return out;
  };
  s.channels = {
      [](const Vec& x) { return (Vec(2) << x[0], 0.0).finished(); },
      [](const Vec& x) { return (Vec(2) << 0.0, x[1]).finished(); },
  };
  s.cost = squared_norm_cost();
  s.default_domain = box_domain(2, -3.0, 3.0);
  return s;
}

PerturbedSystem make_inverted_pendulum() {
  // Closed loop under u = -10.2*x1 - 0.5*x2 + d1*x1 + d2*x2 with
  // g = 9.81, l = 1, b = 0.1, m = 1. The first equation keeps the
  // xdot1 = -x2 sign convention of the source model.
  constexpr double kG = 9.81, kL = 1.0, kB = 0.1, kM = 1.0;
  constexpr double kInertia = kM * kL * kL;
  PerturbedSystem s;
  s.name = "pendulum";
  s.state_dim = 2;
  s.dist_dim = 2;
  s.disturbance.lower = (Vec(2) << -0.3, -0.2).finished();
  s.disturbance.upper = (Vec(2) << 0.3, 0.2).finished();
  s.rhs_fn = [](const Vec& x, const Vec& d) {
    const double u = -10.2 * x[0] - 0.5 * x[1] + d[0] * x[0] + d[1] * x[1];
    Vec out(2);
    out[0] = -x[1];
    out[1] = (kG / kL) * std::sin(x[0]) - (kB / kInertia) * x[1] + u / kInertia;
    return out;
  };
  s.drift = [](const Vec& x) {
    Vec out(2);
    out[0] = -x[1];
    out[1] = (kG / kL) * std::sin(x[0]) - (kB / kInertia) * x[1] +
             (-10.2 * x[0] - 0.5 * x[1]) / kInertia;
    return out;
  };
  s.channels = {
      [](const Vec& x) { return (Vec(2) << 0.0, x[0] / kInertia).finished(); },
      [](const Vec& x) { return (Vec(2) << 0.0, x[1] / kInertia).finished(); },
  };
  s.cost = squared_norm_cost();
  s.default_domain = box_domain(2, -M_PI, M_PI);
  return s;
}

PerturbedSystem make_product_system(int n) {
  if (n < 1) throw ArgumentError("product system needs n >= 1");
  PerturbedSystem s;
  s.name = "product" + std::to_string(n);
  s.state_dim = n;
  s.dist_dim = 1;
  s.disturbance.lower = Vec::Constant(1, -1.0);
  s.disturbance.upper = Vec::Constant(1, 1.0);
  s.rhs_fn = [](const Vec& x, const Vec& d) {
    return Vec(-x + d[0] * x.cwiseProduct(x));
  };
  s.drift = [](const Vec& x) { return Vec(-x); };
  s.channels = {[](const Vec& x) { return Vec(x.cwiseProduct(x)); }};
  s.cost = squared_norm_cost();
  s.default_domain = box_domain(n, -1.5, 1.5);
  return s;
}

PerturbedSystem make_linear_2d() {
  PerturbedSystem s;
  s.name = "linear2d";
  s.state_dim = 2;
  s.dist_dim = 1;
  s.disturbance.lower = Vec::Zero(1);
  s.disturbance.upper = Vec::Zero(1);
  s.rhs_fn = [](const Vec& x, const Vec&) { return Vec(-x); };
  s.drift = [](const Vec& x) { return Vec(-x); };
  s.channels = {[](const Vec& x) { return Vec(Vec::Zero(x.size())); }};
  s.cost = squared_norm_cost();
  s.default_domain = box_domain(2, -2.0, 2.0);
  return s;
}

PerturbedSystem make_system(const std::string& name) {
  if (name == "vdp") return make_van_der_pol();
  if (name == "pendulum") return make_inverted_pendulum();
  if (name.rfind("product", 0) == 0) {
    const std::string tail = name.substr(7);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) {
      throw ArgumentError("unknown system '" + name +
                          "' (expected vdp, pendulum or product<n>)");
    }
    return make_product_system(std::stoi(tail));
  }
  throw ArgumentError("unknown system '" + name +
                      "' (expected vdp, pendulum or product<n>)");
}

}  // namespace zubov
