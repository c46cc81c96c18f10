#pragma once

#include "zubov/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace zubov {

struct Polyline {
  std::vector<std::array<double, 2>> points;
  bool closed = false;
};

/// Level set {v = level} as ordered polylines; every point lies on a
/// grid-cell edge.
struct Contour {
  double level = 0.9;
  std::vector<Polyline> polylines;
};

/// Marching squares with linear edge interpolation; ambiguous saddle cells
/// are resolved by the cell-center average. A level that never crosses the
/// field yields an empty contour.
Contour extract_contour(const ValueGrid& grid, double level);

/// One `# level <c>` header line, then rows `polyline_id,x0,x1` in traversal
/// order; closed loops repeat their first point at the end.
void save_contour(const Contour& contour, const std::string& path);
Contour load_contour(const std::string& path);

}  // namespace zubov
