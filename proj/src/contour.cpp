#include "zubov/contour.hpp"

#include "zubov/errors.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace zubov {

namespace {

struct Crossing {
  std::size_t edge_key;
  std::array<double, 2> point;
};

struct Segment {
  Crossing a, b;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Contour extract_contour(const ValueGrid& grid, double level) {
  grid.validate_geometry();
  if (!(level > 0.0 && level < 1.0)) {
    throw ArgumentError("contour level must lie in (0, 1)");
  }
  Contour contour;
  contour.level = level;

  const int res0 = grid.resolution[0];
  const int res1 = grid.resolution[1];
  const auto node = [res1](int i0, int i1) {
    return static_cast<std::size_t>(i0) * res1 + i1;
  };
  // Edge keys: 2*node for the axis-1 edge leaving (i0,i1), 2*node+1 for the
  // axis-0 edge. Shared edges get bitwise-identical crossing points from both
  // incident cells, so segments chain by exact key match.
  const auto cross_axis1 = [&](int i0, int i1) -> Crossing {
    const double va = grid.at(i0, i1), vb = grid.at(i0, i1 + 1);
    const double t = (level - va) / (vb - va);
    return {2 * node(i0, i1),
            {grid.coord(0, i0),
             grid.coord(1, i1) + t * (grid.coord(1, i1 + 1) - grid.coord(1, i1))}};
  };
  const auto cross_axis0 = [&](int i0, int i1) -> Crossing {
    const double va = grid.at(i0, i1), vb = grid.at(i0 + 1, i1);
    const double t = (level - va) / (vb - va);
    return {2 * node(i0, i1) + 1,
            {grid.coord(0, i0) + t * (grid.coord(0, i0 + 1) - grid.coord(0, i0)),
             grid.coord(1, i1)}};
  };

  std::vector<Segment> segments;
  for (int i0 = 0; i0 + 1 < res0; ++i0) {
    for (int i1 = 0; i1 + 1 < res1; ++i1) {
      const bool above_a = grid.at(i0, i1) >= level;          // (i0,   i1)
      const bool above_b = grid.at(i0, i1 + 1) >= level;      // (i0,   i1+1)
      const bool above_c = grid.at(i0 + 1, i1 + 1) >= level;  // (i0+1, i1+1)
      const bool above_d = grid.at(i0 + 1, i1) >= level;      // (i0+1, i1)

      std::vector<Crossing> hits;
      const bool ab = above_a != above_b;
      const bool bc = above_b != above_c;
      const bool dc = above_d != above_c;
      const bool ad = above_a != above_d;
      if (ab) hits.push_back(cross_axis1(i0, i1));
      if (bc) hits.push_back(cross_axis0(i0, i1 + 1));
      if (dc) hits.push_back(cross_axis1(i0 + 1, i1));
      if (ad) hits.push_back(cross_axis0(i0, i1));

      if (hits.size() == 2) {
        segments.push_back({hits[0], hits[1]});
      } else if (hits.size() == 4) {
        // Saddle: the center average decides which diagonal connects.
        const double center = 0.25 * (grid.at(i0, i1) + grid.at(i0, i1 + 1) +
                                      grid.at(i0 + 1, i1 + 1) + grid.at(i0 + 1, i1));
        const Crossing& e_ab = hits[0];
        const Crossing& e_bc = hits[1];
        const Crossing& e_dc = hits[2];
        const Crossing& e_ad = hits[3];
        if ((center >= level) == above_a) {
          segments.push_back({e_ab, e_bc});
          segments.push_back({e_ad, e_dc});
        } else {
          segments.push_back({e_ab, e_ad});
          segments.push_back({e_bc, e_dc});
        }
      }
    }
  }

  // Chain segments by shared edge keys: open chains first (from degree-1
  // endpoints in ascending key order), then the remaining cycles.
  std::map<std::size_t, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge[segments[s].a.edge_key].push_back(s);
    by_edge[segments[s].b.edge_key].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  const auto walk = [&](std::size_t start_seg, std::size_t start_key) {
    Polyline line;
    std::size_t seg = start_seg;
    std::size_t key = start_key;
    while (true) {
      used[seg] = true;
      const Segment& s = segments[seg];
      const Crossing& from = s.a.edge_key == key ? s.a : s.b;
      const Crossing& to = s.a.edge_key == key ? s.b : s.a;
      if (line.points.empty()) line.points.push_back(from.point);
      line.points.push_back(to.point);
      key = to.edge_key;
      if (key == start_key) {
        line.closed = true;
        line.points.pop_back();  // the walk revisits the first point
        break;
      }
      std::size_t next = segments.size();
      for (std::size_t cand : by_edge[key]) {
        if (!used[cand]) {
          next = cand;
          break;
        }
      }
      if (next == segments.size()) break;
      seg = next;
    }
    return line;
  };

  for (const auto& [key, segs] : by_edge) {
    if (segs.size() != 1) continue;
    if (used[segs.front()]) continue;
    contour.polylines.push_back(walk(segs.front(), key));
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    contour.polylines.push_back(walk(s, segments[s].a.edge_key));
  }
  return contour;
}

void save_contour(const Contour& contour, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write contour: " + path);
  os << "# level " << fmt(contour.level) << '\n';
  for (std::size_t id = 0; id < contour.polylines.size(); ++id) {
    const Polyline& line = contour.polylines[id];
    for (const auto& p : line.points) {
      os << id << ',' << fmt(p[0]) << ',' << fmt(p[1]) << '\n';
    }
    if (line.closed && !line.points.empty()) {
      os << id << ',' << fmt(line.points.front()[0]) << ','
         << fmt(line.points.front()[1]) << '\n';
    }
  }
  if (!os) throw IoError("failed while writing contour: " + path);
}

Contour load_contour(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read contour: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("# level ", 0) != 0) {
    throw ParseError("contour file is missing its # level header", 1);
  }
  Contour contour;
  contour.level = std::stod(line.substr(8));
  int line_no = 1;
  long current = -1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ls(line);
    long id = 0;
    double x0 = 0, x1 = 0;
    if (!(ls >> id >> x0 >> x1)) throw ParseError("bad contour row", line_no);
    if (id != current) {
      contour.polylines.emplace_back();
      current = id;
    }
    contour.polylines.back().points.push_back({x0, x1});
  }
  for (auto& poly : contour.polylines) {
    if (poly.points.size() >= 2 && poly.points.front() == poly.points.back()) {
      poly.closed = true;
      poly.points.pop_back();
    }
  }
  return contour;
}

}  // namespace zubov
