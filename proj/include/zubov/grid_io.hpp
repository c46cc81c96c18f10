#pragma once

#include "zubov/grid.hpp"

#include <string>

namespace zubov {

/// One `#` header line carrying the axis geometry, grid axes and pins, then
/// res0*res1 rows `x0,x1,value` in row-major order, all numbers with 17
/// significant digits. Reading the file back reproduces the values exactly.
void export_grid(const ValueGrid& grid, const std::string& path);
ValueGrid load_grid(const std::string& path);

double sup_diff(const ValueGrid& a, const ValueGrid& b);
double mean_abs_diff(const ValueGrid& a, const ValueGrid& b);

/// Pointwise a - b on identical geometry.
ValueGrid diff_grid(const ValueGrid& a, const ValueGrid& b);

}  // namespace zubov
