#include "zubov/grid_io.hpp"

#include "zubov/errors.hpp"
#include "zubov/reduce.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zubov {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_same_geometry(const ValueGrid& a, const ValueGrid& b) {
  if (!a.same_geometry(b)) {
    throw ArgumentError("grids have different geometry");
  }
}

}  // namespace

void export_grid(const ValueGrid& grid, const std::string& path) {
  grid.validate_geometry();
  std::ofstream os(path);
  if (!os) throw IoError("cannot write grid: " + path);
  os << "# axis0 " << fmt(grid.lower[0]) << ' ' << fmt(grid.upper[0]) << ' '
     << grid.resolution[0] << ", axis1 " << fmt(grid.lower[1]) << ' '
     << fmt(grid.upper[1]) << ' ' << grid.resolution[1] << ", slice axes "
     << grid.state_axes[0] << ' ' << grid.state_axes[1] << " pins";
  if (grid.pins.empty()) {
    os << " -";
  } else {
    for (const auto& [axis, value] : grid.pins) {
      os << ' ' << axis << ':' << fmt(value);
    }
  }
  os << '\n';
  for (int i0 = 0; i0 < grid.resolution[0]; ++i0) {
    for (int i1 = 0; i1 < grid.resolution[1]; ++i1) {
      os << fmt(grid.coord(0, i0)) << ',' << fmt(grid.coord(1, i1)) << ','
         << fmt(grid.at(i0, i1)) << '\n';
    }
  }
  if (!os) throw IoError("failed while writing grid: " + path);
}

ValueGrid load_grid(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read grid: " + path);
  std::string header;
  if (!std::getline(is, header) || header.empty() || header[0] != '#') {
    throw ParseError("grid file is missing its # header", 1);
  }
  for (char& c : header) {
    if (c == ',') c = ' ';
  }
  std::istringstream hs(header.substr(1));
  ValueGrid grid;
  std::string tag;
  auto expect = [&](const char* want) {
    if (!(hs >> tag) || tag != want) {
      throw ParseError(std::string("grid header: expected '") + want + "'", 1);
    }
  };
  expect("axis0");
  if (!(hs >> grid.lower[0] >> grid.upper[0] >> grid.resolution[0])) {
    throw ParseError("grid header: bad axis0 spec", 1);
  }
  expect("axis1");
  if (!(hs >> grid.lower[1] >> grid.upper[1] >> grid.resolution[1])) {
    throw ParseError("grid header: bad axis1 spec", 1);
  }
  expect("slice");
  expect("axes");
  if (!(hs >> grid.state_axes[0] >> grid.state_axes[1])) {
    throw ParseError("grid header: bad slice axes", 1);
  }
  expect("pins");
  std::string tok;
  while (hs >> tok) {
    if (tok == "-") break;
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      throw ParseError("grid header: bad pin '" + tok + "'", 1);
    }
    try {
      grid.pins.emplace_back(std::stoi(tok.substr(0, colon)),
                             std::stod(tok.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ParseError("grid header: bad pin '" + tok + "'", 1);
    }
  }

  if (grid.resolution[0] < 2 || grid.resolution[1] < 2) {
    throw ParseError("grid header: resolution must be >= 2", 1);
  }
  const std::size_t count =
      static_cast<std::size_t>(grid.resolution[0]) * grid.resolution[1];
  grid.values.resize(count);
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) {
      throw ParseError("grid file ended early", static_cast<int>(i + 2));
    }
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ls(line);
    double x0 = 0, x1 = 0, v = 0;
    if (!(ls >> x0 >> x1 >> v)) {
      throw ParseError("bad grid row", static_cast<int>(i + 2));
    }
    grid.values[i] = v;
  }
  grid.validate_geometry();
  return grid;
}

double sup_diff(const ValueGrid& a, const ValueGrid& b) {
  check_same_geometry(a, b);
  double sup = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    sup = std::max(sup, std::abs(a.values[i] - b.values[i]));
  }
  return sup;
}

double mean_abs_diff(const ValueGrid& a, const ValueGrid& b) {
  check_same_geometry(a, b);
  std::vector<double> terms(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    terms[i] = std::abs(a.values[i] - b.values[i]);
  }
  return sorted_pairwise_mean(std::move(terms));
}

ValueGrid diff_grid(const ValueGrid& a, const ValueGrid& b) {
  check_same_geometry(a, b);
  ValueGrid out = a;
  out.system_name = a.system_name + "-diff";
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = a.values[i] - b.values[i];
  }
  return out;
}

}  // namespace zubov
