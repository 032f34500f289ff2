#pragma once

#include <random>

#include "spectemp/linalg.hpp"

namespace spectemp::testutil {

inline Mat randn(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = gauss(rng);
  return m;
}

inline Mat random_symmetric(int n, Rng& rng) { return sym(randn(n, n, rng)); }

inline Mat random_spd(int n, Rng& rng) {
  Mat a = randn(n, n, rng);
  return a * a.transpose() + 0.1 * Mat::Identity(n, n);
}

inline double frob_rel(const Mat& a, const Mat& b) { return (a - b).norm() / b.norm(); }

}  // namespace spectemp::testutil
