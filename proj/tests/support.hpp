#pragma once

#include <cmath>
#include <random>

#include "pslab/core.hpp"

namespace testing_support {

using pslab::Mat;
using pslab::Vec;

inline Vec random_sum_zero(int d, pslab::Rng& rng, double scale = 3.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v.array() - v.mean();
}

inline Mat random_sl_matrix(int d, pslab::Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = n(rng);
  double det = g.determinant();
  if (det < 0) g.col(0) *= -1, det = -det;
  return g / std::pow(det, 1.0 / d);
}

// Block averages over the cuts of theta, written out directly.
inline Vec block_average(const Vec& v, const std::vector<int>& theta_indices) {
  const int d = static_cast<int>(v.size());
  std::vector<int> cuts{0};
  for (int i : theta_indices) cuts.push_back(i);
  cuts.push_back(d);
  Vec out(d);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    double s = 0;
    for (int i = cuts[k - 1]; i < cuts[k]; ++i) s += v[i];
    for (int i = cuts[k - 1]; i < cuts[k]; ++i) out[i] = s / (cuts[k] - cuts[k - 1]);
  }
  return out;
}

inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing_support
