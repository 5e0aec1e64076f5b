#include "pslab/wedge.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace pslab {

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

const std::vector<std::vector<int>>& subsets(int d, int j) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, j);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> out;
  std::vector<int> cur(j);
  for (int i = 0; i < j; ++i) cur[i] = i;
  if (j <= d) {
    while (true) {
      out.push_back(cur);
      int i = j - 1;
      while (i >= 0 && cur[i] == d - j + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int k = i + 1; k < j; ++k) cur[k] = cur[k - 1] + 1;
    }
  }
  return cache.emplace(key, std::move(out)).first->second;
}

Mat exterior_power(const Mat& m, int j) {
  int d = static_cast<int>(m.rows());
  const auto& s = subsets(d, j);
  int n = static_cast<int>(s.size());
  Mat out(n, n);
  Mat sub(j, j);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int r = 0; r < j; ++r)
        for (int c = 0; c < j; ++c) sub(r, c) = m(s[a][r], s[b][c]);
      out(a, b) = j == 1 ? sub(0, 0) : sub.partialPivLu().determinant();
    }
  return out;
}

Vec wedge_of_columns(const Mat& f, int j) {
  int d = static_cast<int>(f.rows());
  const auto& s = subsets(d, j);
  Vec out(s.size());
  Mat sub(j, j);
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < j; ++c) sub(r, c) = f(s[a][r], c);
    out[a] = j == 1 ? sub(0, 0) : sub.partialPivLu().determinant();
  }
  return out;
}

namespace {

double small_determinant(double* a, int n) {
  double det = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0) return 0;
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      double f = a[r * n + c] / a[c * n + c];
      for (int k = c + 1; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

}  // namespace

void wedge_of_columns(const double* f, int d, int j, double* out) {
  const auto& s = subsets(d, j);
  if (j == 1) {
    for (int i = 0; i < d; ++i) out[i] = f[i];
    return;
  }
  double sub[64];
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (int r = 0; r < j; ++r)
      for (int c = 0; c < j; ++c) sub[r * j + c] = f[c * d + s[a][r]];
    out[a] = small_determinant(sub, j);
  }
}

Mat subspace_of_wedge(const Vec& omega, int d, int j) {
  if (j == 1) return omega.normalized();
  if (j == d) return Mat::Identity(d, d);
  // interior products with e_S, |S| = j-1, all lie in the subspace
  const auto& big = subsets(d, j);
  std::map<std::vector<int>, int> index;
  for (std::size_t a = 0; a < big.size(); ++a) index[big[a]] = static_cast<int>(a);
  const auto& small = subsets(d, j - 1);
  Mat span = Mat::Zero(d, small.size());
  for (std::size_t c = 0; c < small.size(); ++c) {
    const auto& S = small[c];
    for (int b = 0; b < d; ++b) {
      if (std::find(S.begin(), S.end(), b) != S.end()) continue;
      std::vector<int> I = S;
      int p = 0;
      while (p < static_cast<int>(S.size()) && S[p] < b) ++p;
      I.insert(I.begin() + p, b);
      double sign = (p % 2 == 0) ? 1.0 : -1.0;
      span(b, c) = sign * omega[index[I]];
    }
  }
  Eigen::JacobiSVD<Mat> svd(span, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(j);
}

Mat frame_from_subspaces(const std::vector<Mat>& nested, int d) {
  Mat frame(d, d);
  int filled = 0;
  auto append = [&](const Mat& cand, int want) {
    // remove what is already spanned, keep the dominant directions
    Mat c = cand;
    if (filled > 0) c -= frame.leftCols(filled) * (frame.leftCols(filled).transpose() * c);
    Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeThinU);
    frame.middleCols(filled, want) = svd.matrixU().leftCols(want);
    filled += want;
  };
  for (const Mat& v : nested) {
    int want = static_cast<int>(v.cols()) - filled;
    if (want > 0) append(v, want);
  }
  if (filled < d) append(Mat::Identity(d, d), d - filled);
  if (frame.determinant() < 0) frame.col(d - 1) *= -1;
  return frame;
}

double top_singular_value(const double* m, int n) {
  switch (n) {
    case 1:
      return std::abs(m[0]);
    case 2: {
      double a = m[0], c = m[1], b = m[2], d = m[3];
      double f = a * a + b * b + c * c + d * d;
      double det = a * d - b * c;
      double disc = std::max(0.0, f * f - 4 * det * det);
      return std::sqrt(0.5 * (f + std::sqrt(disc)));
    }
    case 3: {
      Eigen::Map<const Eigen::Matrix3d> a(m);
      Eigen::JacobiSVD<Eigen::Matrix3d> svd(a);
      return svd.singularValues()[0];
    }
    case 4: {
      Eigen::Map<const Eigen::Matrix4d> a(m);
      Eigen::JacobiSVD<Eigen::Matrix4d> svd(a);
      return svd.singularValues()[0];
    }
    default: {
      Eigen::Map<const Mat> a(m, n, n);
      Eigen::JacobiSVD<Mat> svd(a);
      return svd.singularValues()[0];
    }
  }
}

}  // namespace pslab
