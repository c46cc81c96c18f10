#include "zubov/sampling.hpp"

#include "zubov/errors.hpp"
#include "zubov/rng.hpp"

#include <vector>

namespace zubov {

SampleSet sample_interior(const Domain& omega, int count, std::uint64_t seed) {
  omega.validate();
  if (count < 1) throw ArgumentError("sample count must be >= 1");
  const int n = omega.dim();
  SampleSet out;
  out.kind = SampleKind::interior;
  out.points.resize(n, count);
  Xoshiro256PlusPlus rng(seed);
  for (int i = 0; i < count; ++i) {
    for (int d = 0; d < n; ++d) {
      out.points(d, i) = rng.uniform_open(omega.lower[d], omega.upper[d]);
    }
  }
  return out;
}

SampleSet sample_boundary(const Domain& omega, int count, std::uint64_t seed) {
  omega.validate();
  if (count < 1) throw ArgumentError("sample count must be >= 1");
  const int n = omega.dim();

  // Face k pins axis k/2 to its lower (even k) or upper (odd k) bound. Both
  // faces of a pair share the same area: the product of the other extents.
  std::vector<double> cumulative(2 * n);
  double total = 0.0;
  for (int axis = 0; axis < n; ++axis) {
    double area = 1.0;
    for (int d = 0; d < n; ++d) {
      if (d != axis) area *= omega.upper[d] - omega.lower[d];
    }
    total += area;
    cumulative[2 * axis] = total;
    total += area;
    cumulative[2 * axis + 1] = total;
  }

  SampleSet out;
  out.kind = SampleKind::boundary;
  out.points.resize(n, count);
  Xoshiro256PlusPlus rng(seed);
  for (int i = 0; i < count; ++i) {
    const double pick = rng.uniform01() * total;
    int face = 2 * n - 1;
    for (int k = 0; k < 2 * n; ++k) {
      if (pick < cumulative[k]) {
        face = k;
        break;
      }
    }
    const int axis = face / 2;
    for (int d = 0; d < n; ++d) {
      if (d == axis) {
        out.points(d, i) = face % 2 == 0 ? omega.lower[d] : omega.upper[d];
      } else {
        out.points(d, i) = rng.uniform(omega.lower[d], omega.upper[d]);
      }
    }
  }
  return out;
}

}  // namespace zubov
