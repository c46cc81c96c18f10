#include "zubov/fdm.hpp"

#include "zubov/errors.hpp"
#include "zubov/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace zubov {

namespace {

struct FootStencil {
  std::size_t base = 0;   // index of the lower-left node of the enclosing cell
  double w00 = 0, w01 = 0, w10 = 0, w11 = 0;
  bool outside = false;
};

FootStencil make_stencil(const ValueGrid& geo, double x0, double x1) {
  FootStencil s;
  if (x0 < geo.lower[0] || x0 > geo.upper[0] || x1 < geo.lower[1] ||
      x1 > geo.upper[1]) {
    s.outside = true;
    return s;
  }
  int idx[2];
  double w[2];
  const double q[2] = {x0, x1};
  for (int a = 0; a < 2; ++a) {
    const double t = (q[a] - geo.lower[a]) / geo.spacing(a);
    int i = static_cast<int>(std::floor(t));
    if (i > geo.resolution[a] - 2) i = geo.resolution[a] - 2;
    if (i < 0) i = 0;
    idx[a] = i;
    double wa = (q[a] - geo.coord(a, i)) / geo.spacing(a);
    w[a] = std::clamp(wa, 0.0, 1.0);
  }
  s.base = static_cast<std::size_t>(idx[0]) * geo.resolution[1] + idx[1];
  s.w00 = (1.0 - w[0]) * (1.0 - w[1]);
  s.w01 = (1.0 - w[0]) * w[1];
  s.w10 = w[0] * (1.0 - w[1]);
  s.w11 = w[0] * w[1];
  return s;
}

}  // namespace

ValueGrid solve_fdm(const PerturbedSystem& system, const Domain& omega,
                    const FdmOptions& options, FdmDiagnostics* diagnostics) {
  if (system.state_dim != 2 || omega.dim() != 2) {
    throw ArgumentError("the grid solver only supports 2-d systems");
  }
  omega.validate();
  if (options.resolution < 2) throw ArgumentError("resolution must be >= 2");
  if (!(options.alpha > 0.0)) throw ArgumentError("alpha must be positive");
  if (!(options.tol > 0.0)) throw ArgumentError("tol must be positive");
  if (options.max_sweeps < 1) throw ArgumentError("max_sweeps must be >= 1");

  ValueGrid grid;
  grid.lower = {omega.lower[0], omega.lower[1]};
  grid.upper = {omega.upper[0], omega.upper[1]};
  grid.resolution = {options.resolution, options.resolution};
  grid.system_name = system.name;
  grid.alpha = options.alpha;
  const std::size_t node_count =
      static_cast<std::size_t>(options.resolution) * options.resolution;
  grid.values.assign(node_count, 0.0);

  // Unique disturbance vertices; duplicates appear for degenerate boxes.
  std::vector<Vec> vertices;
  for (const Vec& v : system.disturbance.vertices()) {
    bool seen = false;
    for (const Vec& u : vertices) {
      if ((u.array() == v.array()).all()) {
        seen = true;
        break;
      }
    }
    if (!seen) vertices.push_back(v);
  }
  const std::size_t nv = vertices.size();

  // The dynamics are stationary, so feet and contraction factors are fixed;
  // precompute f and g at every (node, vertex) pair to size the step, then
  // the stencils once h is known.
  std::vector<Vec> flows(node_count * nv);
  std::vector<double> costs(node_count * nv);
  double max_speed = 0.0;
  std::size_t origin_node = 0;
  double origin_dist = std::numeric_limits<double>::infinity();
  for (int i0 = 0; i0 < options.resolution; ++i0) {
    for (int i1 = 0; i1 < options.resolution; ++i1) {
      const std::size_t node =
          static_cast<std::size_t>(i0) * options.resolution + i1;
      Vec x(2);
      x << grid.coord(0, i0), grid.coord(1, i1);
      if (x.norm() < origin_dist) {
        origin_dist = x.norm();
        origin_node = node;
      }
      for (std::size_t k = 0; k < nv; ++k) {
        Vec f = system.rhs(x, vertices[k]);
        max_speed = std::max(max_speed, f.norm());
        flows[node * nv + k] = std::move(f);
        costs[node * nv + k] = system.running_cost(x, vertices[k]);
      }
    }
  }

  const double min_spacing = std::min(grid.spacing(0), grid.spacing(1));
  double h = options.h;
  if (h <= 0.0) h = max_speed > 0.0 ? 0.5 * min_spacing / max_speed : 0.5 * min_spacing;
  if (diagnostics) diagnostics->h_used = h;

  std::vector<FootStencil> stencils(node_count * nv);
  std::vector<double> factors(node_count * nv);  // exp(-alpha g h)
  for (int i0 = 0; i0 < options.resolution; ++i0) {
    for (int i1 = 0; i1 < options.resolution; ++i1) {
      const std::size_t node =
          static_cast<std::size_t>(i0) * options.resolution + i1;
      const double x0 = grid.coord(0, i0);
      const double x1 = grid.coord(1, i1);
      for (std::size_t k = 0; k < nv; ++k) {
        const Vec& f = flows[node * nv + k];
        stencils[node * nv + k] = make_stencil(grid, x0 + h * f[0], x1 + h * f[1]);
        factors[node * nv + k] = std::exp(-options.alpha * costs[node * nv + k] * h);
      }
    }
  }
  flows.clear();
  flows.shrink_to_fit();

  std::vector<double> next(node_count, 0.0);
  std::atomic<int> clamp_warnings{0};
  const std::size_t chunks = chunk_count(node_count);
  std::vector<double> chunk_max(chunks), chunk_min(chunks);

  int sweep = 0;
  double max_change = std::numeric_limits<double>::infinity();
  const int res1 = options.resolution;
  while (sweep < options.max_sweeps && max_change >= options.tol) {
    const std::vector<double>& old = grid.values;
    parallel_chunks(node_count, [&](std::size_t c, std::size_t b, std::size_t e) {
      double local_max = 0.0;
      double local_min = 0.0;
      for (std::size_t node = b; node < e; ++node) {
        double best = 0.0;
        for (std::size_t k = 0; k < nv; ++k) {
          const FootStencil& s = stencils[node * nv + k];
          const double v_foot =
              s.outside ? 1.0
                        : s.w00 * old[s.base] + s.w01 * old[s.base + 1] +
                              s.w10 * old[s.base + res1] +
                              s.w11 * old[s.base + res1 + 1];
          const double candidate =
              1.0 - factors[node * nv + k] * (1.0 - v_foot);
          if (k == 0 || candidate > best) best = candidate;
        }
        if (best < 0.0) {
          best = 0.0;
          clamp_warnings.fetch_add(1, std::memory_order_relaxed);
        } else if (best > 1.0) {
          best = 1.0;
          clamp_warnings.fetch_add(1, std::memory_order_relaxed);
        }
        if (node == origin_node) best = 0.0;
        next[node] = best;
        const double delta = best - old[node];
        local_max = std::max(local_max, std::abs(delta));
        local_min = std::min(local_min, delta);
      }
      chunk_max[c] = local_max;
      chunk_min[c] = local_min;
    });
    grid.values.swap(next);
    max_change = 0.0;
    double min_delta = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
      max_change = std::max(max_change, chunk_max[c]);
      min_delta = std::min(min_delta, chunk_min[c]);
    }
    if (diagnostics) {
      diagnostics->sweep_max_change.push_back(max_change);
      diagnostics->sweep_min_delta.push_back(min_delta);
    }
    ++sweep;
  }

  grid.sweeps = sweep;
  grid.final_residual = max_change;
  grid.converged = max_change < options.tol;
  grid.clamp_warnings = clamp_warnings.load();
  return grid;
}

}  // namespace zubov
