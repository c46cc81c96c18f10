#pragma once

#include "zubov/dynamics.hpp"

#include <cstdint>

namespace zubov {

enum class SampleKind { interior, boundary, anchor };

/// Column-per-point sample block.
struct SampleSet {
  Mat points;
  SampleKind kind = SampleKind::interior;
};

/// M i.i.d. uniform points in the open box; every coordinate is strictly
/// between the bounds. Deterministic per (domain, M, seed).
SampleSet sample_interior(const Domain& omega, int count, std::uint64_t seed);

/// M points uniform on the box surface: a face is chosen with probability
/// proportional to its (n-1)-dimensional area, the pinned coordinate is set
/// exactly to the face value, the rest are uniform.
SampleSet sample_boundary(const Domain& omega, int count, std::uint64_t seed);

}  // namespace zubov
