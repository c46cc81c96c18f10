#pragma once

#include "zubov/dynamics.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace zubov {

/// Regular 2-d scalar field over [lower0, upper0] x [lower1, upper1].
/// Values are row-major with axis 0 outermost: values[i0 * resolution1 + i1].
struct ValueGrid {
  std::array<double, 2> lower{};
  std::array<double, 2> upper{};
  std::array<int, 2> resolution{};
  std::vector<double> values;

  // Provenance (not part of the CSV export).
  std::string system_name;
  double alpha = 0.0;
  int sweeps = 0;
  double final_residual = 0.0;
  bool converged = true;
  int clamp_warnings = 0;

  // For slices of higher-dimensional fields: which original state axes the
  // grid axes map to, and the pinned values of the remaining axes.
  std::array<int, 2> state_axes{0, 1};
  std::vector<std::pair<int, double>> pins;

  double spacing(int axis) const;
  double coord(int axis, int index) const;
  double at(int i0, int i1) const { return values[static_cast<std::size_t>(i0) * resolution[1] + i1]; }
  double& at(int i0, int i1) { return values[static_cast<std::size_t>(i0) * resolution[1] + i1]; }

  void validate_geometry() const;
  bool same_geometry(const ValueGrid& other) const;
};

/// Multilinear interpolation inside the box; exactly 1 outside (the exterior
/// convention of the worst-case value field).
double interpolate(const ValueGrid& grid, const Vec& x);

}  // namespace zubov
