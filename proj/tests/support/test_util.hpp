#pragma once

#include "zubov/dynamics.hpp"
#include "zubov/net.hpp"

namespace zubov::testutil {

inline bool bits_equal(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

inline bool bits_equal(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

inline bool params_equal(const MlpParams& a, const MlpParams& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (!bits_equal(a.weights[l], b.weights[l])) return false;
    if (!bits_equal(a.biases[l], b.biases[l])) return false;
  }
  return true;
}

}  // namespace zubov::testutil
