#pragma once

#include <span>
#include <vector>

namespace zubov {

/// Pairwise (tree) summation in the given order.
double pairwise_sum(std::span<const double> values);

/// Sum/mean with a canonical reduction order: terms are sorted ascending,
/// then pairwise-summed. The result is invariant to the input permutation
/// down to the last bit, which makes loss values independent of how the
/// per-point work was scheduled. Non-finite inputs skip the sort and
/// propagate through a plain left-to-right sum.
double sorted_pairwise_sum(std::vector<double> terms);
double sorted_pairwise_mean(std::vector<double> terms);

}  // namespace zubov
