#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace zubov {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

/// Admissible disturbance values: an axis-aligned box in R^m.
struct DisturbanceBox {
  Vec lower;
  Vec upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vec& delta, double tol = 0.0) const;

  /// The 2^m corner points; bit j of the vertex index selects upper[j].
  std::vector<Vec> vertices() const;

  void validate() const;
};

/// Axis-aligned sampling region Omega with the origin strictly inside.
struct Domain {
  Vec lower;
  Vec upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vec& x) const;

  /// Norm of the farthest box corner from the origin.
  double max_radius() const;

  void validate() const;
};

using StateFn = std::function<Vec(const Vec&)>;
using RhsFn = std::function<Vec(const Vec&, const Vec&)>;
using CostFn = std::function<double(const Vec&, const Vec&)>;

/// A perturbed ODE  xdot = f(x, delta)  with equilibrium f(0, delta) = 0 for
/// every delta in the box, a nonnegative running cost g(x, delta), and the
/// affine-in-delta decomposition
///     f(x, delta) = drift(x) + sum_j delta_j * channels[j](x).
/// rhs_fn holds the direct form of f; the decomposition is stored alongside
/// so the Hamiltonian maximization over delta lands on a box vertex. The two
/// representations must agree componentwise (randomized consistency test).
struct PerturbedSystem {
  std::string name;
  int state_dim = 0;
  int dist_dim = 0;
  DisturbanceBox disturbance;
  RhsFn rhs_fn;
  StateFn drift;
  std::vector<StateFn> channels;
  CostFn cost;  // defaults to |x|^2, independent of delta
  Domain default_domain;

  /// f(x, delta). Throws ArgumentError on dimension mismatch, NumericError
  /// (naming the state) when a component comes out non-finite.
  Vec rhs(const Vec& x, const Vec& delta) const;

  double running_cost(const Vec& x, const Vec& delta) const;
};

PerturbedSystem make_van_der_pol();
PerturbedSystem make_inverted_pendulum();
PerturbedSystem make_product_system(int n);

/// xdot = -x on [-2, 2]^2 with one identically-zero disturbance channel;
/// its worst-case value field has the closed form 1 - exp(-alpha*|x|^2/2),
/// which the grid solver is validated against.
PerturbedSystem make_linear_2d();

/// Parses the benchmark names "vdp", "pendulum", "product<n>".
PerturbedSystem make_system(const std::string& name);

}  // namespace zubov
