#include "zubov/reduce.hpp"

#include <algorithm>
#include <cmath>

namespace zubov {

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double sorted_pairwise_sum(std::vector<double> terms) {
  bool finite = true;
  for (double t : terms) {
    if (!std::isfinite(t)) {
      finite = false;
      break;
    }
  }
  if (!finite) {
    // NaN/inf would break the sort's ordering; let them propagate instead.
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum;
  }
  std::sort(terms.begin(), terms.end());
  return pairwise_sum(terms);
}

double sorted_pairwise_mean(std::vector<double> terms) {
  if (terms.empty()) return 0.0;
  const double n = static_cast<double>(terms.size());
  return sorted_pairwise_sum(std::move(terms)) / n;
}

}  // namespace zubov
