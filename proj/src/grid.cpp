#include "zubov/grid.hpp"

#include "zubov/errors.hpp"

#include <cmath>

namespace zubov {

double ValueGrid::spacing(int axis) const {
  return (upper[axis] - lower[axis]) / static_cast<double>(resolution[axis] - 1);
}

double ValueGrid::coord(int axis, int index) const {
  if (index == resolution[axis] - 1) return upper[axis];
  return lower[axis] + spacing(axis) * static_cast<double>(index);
}

void ValueGrid::validate_geometry() const {
  for (int a = 0; a < 2; ++a) {
    if (resolution[a] < 2) throw ArgumentError("grid resolution must be >= 2");
    if (!(lower[a] < upper[a])) throw ArgumentError("grid has lower >= upper");
  }
  if (values.size() != static_cast<std::size_t>(resolution[0]) * resolution[1]) {
    throw ArgumentError("grid value count does not match its resolution");
  }
}

bool ValueGrid::same_geometry(const ValueGrid& other) const {
  return lower == other.lower && upper == other.upper &&
         resolution == other.resolution;
}

double interpolate(const ValueGrid& grid, const Vec& x) {
  if (x.size() != 2) throw ArgumentError("grid interpolation expects a 2-d point");
  for (int a = 0; a < 2; ++a) {
    if (x[a] < grid.lower[a] || x[a] > grid.upper[a]) return 1.0;
  }
  double w[2];
  int idx[2];
  for (int a = 0; a < 2; ++a) {
    const double t = (x[a] - grid.lower[a]) / grid.spacing(a);
    // Queries that are bitwise equal to a node coordinate must reproduce the
    // stored value exactly, so resolve those before the generic path.
    const long nearest = std::lround(t);
    if (nearest >= 0 && nearest < grid.resolution[a] &&
        x[a] == grid.coord(a, static_cast<int>(nearest))) {
      if (nearest == grid.resolution[a] - 1) {
        idx[a] = grid.resolution[a] - 2;
        w[a] = 1.0;
      } else {
        idx[a] = static_cast<int>(nearest);
        w[a] = 0.0;
      }
      continue;
    }
    int i = static_cast<int>(std::floor(t));
    if (i >= grid.resolution[a] - 1) i = grid.resolution[a] - 2;
    if (i < 0) i = 0;
    idx[a] = i;
    w[a] = (x[a] - grid.coord(a, i)) / grid.spacing(a);
    if (w[a] < 0.0) w[a] = 0.0;
    if (w[a] > 1.0) w[a] = 1.0;
  }
  const double v00 = grid.at(idx[0], idx[1]);
  const double v01 = grid.at(idx[0], idx[1] + 1);
  const double v10 = grid.at(idx[0] + 1, idx[1]);
  const double v11 = grid.at(idx[0] + 1, idx[1] + 1);
  return (1.0 - w[0]) * ((1.0 - w[1]) * v00 + w[1] * v01) +
         w[0] * ((1.0 - w[1]) * v10 + w[1] * v11);
}

}  // namespace zubov
