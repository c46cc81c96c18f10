#pragma once

#include "zubov/dynamics.hpp"
#include "zubov/grid.hpp"

#include <vector>

namespace zubov {

struct FdmOptions {
  int resolution = 201;  // nodes per axis
  double alpha = 0.5;
  double h = 0.0;     // pseudo-time step; <= 0 picks half grid spacing / max |f|
  double tol = 1e-6;  // sweep max-change threshold
  int max_sweeps = 5000;
};

struct FdmDiagnostics {
  std::vector<double> sweep_max_change;
  std::vector<double> sweep_min_delta;  // most negative node change per sweep
  double h_used = 0.0;
};

/// Semi-Lagrangian value iteration for the worst-case Zubov field on a 2-d
/// domain: Jacobi sweeps of
///     v(x) <- max over box vertices delta of
///             1 - exp(-alpha g(x,delta) h) (1 - v(x + h f(x,delta)))
/// with v interpolated multilinearly, v = 1 outside Omega, and the node
/// nearest the origin pinned to 0. Starting from v = 0 the sweeps are
/// node-wise non-decreasing. Non-convergence within max_sweeps returns the
/// current field with converged = false and the final residual recorded.
ValueGrid solve_fdm(const PerturbedSystem& system, const Domain& omega,
                    const FdmOptions& options,
                    FdmDiagnostics* diagnostics = nullptr);

}  // namespace zubov
