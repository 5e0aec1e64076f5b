#include <algorithm>
#include <map>
#include <set>

#include "pslab/growth.hpp"

namespace pslab {

Vec nnls(const Mat& A, const Vec& b) {
  const int n = static_cast<int>(A.cols());
  Vec x = Vec::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()) * (1.0 + b.norm());
  for (int outer = 0; outer < 3 * n + 3; ++outer) {
    Vec w = A.transpose() * (b - A * x);
    int j = -1;
    double best = tol;
    for (int k = 0; k < n; ++k)
      if (!passive[k] && w[k] > best) {
        best = w[k];
        j = k;
      }
    if (j < 0) break;
    passive[j] = true;
    for (int inner = 0; inner < 3 * n + 3; ++inner) {
      std::vector<int> P;
      for (int k = 0; k < n; ++k)
        if (passive[k]) P.push_back(k);
      Mat Ap(A.rows(), P.size());
      for (std::size_t q = 0; q < P.size(); ++q) Ap.col(q) = A.col(P[q]);
      Vec zp = Ap.colPivHouseholderQr().solve(b);
      Vec z = Vec::Zero(n);
      for (std::size_t q = 0; q < P.size(); ++q) z[P[q]] = zp[q];
      bool feasible = true;
      for (int k : P) feasible = feasible && z[k] > 0;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int k : P)
        if (z[k] <= 0) alpha = std::min(alpha, x[k] / (x[k] - z[k]));
      x += alpha * (z - x);
      for (int k : P)
        if (x[k] <= 1e-15) {
          x[k] = 0;
          passive[k] = false;
        }
    }
  }
  return x;
}

double distance_to_cone(const Vec& x, const Mat& rays) {
  if (rays.cols() == 0) return x.norm();
  Vec c = nnls(rays, x);
  return (rays * c - x).norm();
}

namespace {

// Orthonormal basis of a_theta (d x |theta|).
Mat theta_basis(const ThetaSet& theta) {
  int d = theta.d();
  Mat span(d, theta.size());
  for (int k = 0; k < theta.size(); ++k) {
    int i = theta.indices()[k];
    for (int j = 0; j < d; ++j) span(j, k) = j < i ? double(d - i) / d : -double(i) / d;
  }
  Eigen::HouseholderQR<Mat> qr(span);
  Mat q = qr.householderQ();
  return q.leftCols(theta.size());
}

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

LimitConeEstimate limit_cone(const OrbitBall& ball, const ThetaSet& theta, double cutoff) {
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "theta and ball have different d");
  LimitConeEstimate est;
  est.theta = theta;
  const int d = ball.d();
  const Mat B = theta_basis(theta);
  const int m = static_cast<int>(B.cols());
  std::vector<Vec> coords;
  std::vector<Vec> all_points;
  Vec buf(d);
  std::size_t surviving = 0;
  std::set<std::vector<long long>> seen;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (int j = 0; j < d; ++j) buf[j] = ball.mu(i)[j];
    p_theta_inplace(buf.data(), theta);
    double n = buf.norm();
    if (n < 1e-12) continue;
    Vec y = B.transpose() * buf;
    all_points.push_back(y);
    if (n < cutoff) continue;
    ++surviving;
    Vec u = y / y.norm();
    std::vector<long long> key(m);
    for (int j = 0; j < m; ++j) key[j] = std::llround(u[j] * 1e9);
    if (seen.insert(key).second) coords.push_back(u);
  }
  if (surviving < 3) throw Error(ErrorKind::insufficient_data, "fewer than 3 directions above the cutoff");
  for (const Vec& u : coords) est.sample_directions.push_back(B * u);

  std::vector<Vec> rays;
  if (m == 1) {
    bool pos = false, neg = false;
    for (const Vec& u : coords) (u[0] > 0 ? pos : neg) = true;
    if (pos) rays.push_back(Vec::Ones(1));
    if (neg) rays.push_back(-Vec::Ones(1));
  } else {
    Vec c = Vec::Zero(m);
    for (const Vec& u : coords) c += u;
    c.normalize();
    double minproj = INFINITY;
    for (const Vec& u : coords) minproj = std::min(minproj, u.dot(c));
    // orthonormal basis of c-perp
    Mat full = Mat::Identity(m, m);
    full.col(0) = c;
    Eigen::HouseholderQR<Mat> qr(full);
    Mat Q = qr.householderQ();
    Mat perp = Q.rightCols(m - 1);
    std::set<std::size_t> chosen;
    if (minproj > 1e-9 && m - 1 <= 2) {
      std::vector<Vec> z;
      for (const Vec& u : coords) z.push_back(perp.transpose() * (u / u.dot(c)));
      if (m - 1 == 1) {
        std::size_t a = 0, b = 0;
        for (std::size_t k = 0; k < z.size(); ++k) {
          if (z[k][0] < z[a][0]) a = k;
          if (z[k][0] > z[b][0]) b = k;
        }
        chosen.insert(a);
        if (z[b][0] - z[a][0] > 1e-9) chosen.insert(b);
      } else {
        std::vector<std::size_t> idx(z.size());
        for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
          return z[a][0] < z[b][0] || (z[a][0] == z[b][0] && z[a][1] < z[b][1]);
        });
        std::vector<std::size_t> hull(2 * idx.size());
        std::size_t k = 0;
        auto pt = [&](std::size_t q) { return Eigen::Vector2d(z[q][0], z[q][1]); };
        for (std::size_t q : idx) {
          while (k >= 2 && cross(pt(hull[k - 2]), pt(hull[k - 1]), pt(q)) <= 1e-14) --k;
          hull[k++] = q;
        }
        for (std::size_t t = idx.size() - 1, lo = k + 1; t-- > 0;) {
          std::size_t q = idx[t];
          while (k >= lo && cross(pt(hull[k - 2]), pt(hull[k - 1]), pt(q)) <= 1e-14) --k;
          hull[k++] = q;
        }
        hull.resize(k > 1 ? k - 1 : k);
        for (std::size_t q : hull) chosen.insert(q);
        // collapse numerically coincident vertices
        std::vector<std::size_t> keep;
        for (std::size_t q : chosen) {
          bool dup = false;
          for (std::size_t r : keep) dup = dup || (z[q] - z[r]).norm() < 1e-9;
          if (!dup) keep.push_back(q);
        }
        chosen = std::set<std::size_t>(keep.begin(), keep.end());
      }
    } else {
      est.exact_hull = false;
      Rng rng(12345);
      std::normal_distribution<double> nd;
      for (int s = 0; s < 4000; ++s) {
        Vec dir(m);
        for (int j = 0; j < m; ++j) dir[j] = nd(rng);
        std::size_t arg = 0;
        double best = -INFINITY;
        for (std::size_t q = 0; q < coords.size(); ++q) {
          double v = minproj > 1e-9 ? (perp.transpose() * (coords[q] / coords[q].dot(c))).dot(dir.tail(m - 1))
                                    : coords[q].dot(dir);
          if (v > best) {
            best = v;
            arg = q;
          }
        }
        chosen.insert(arg);
      }
    }
    for (std::size_t q : chosen) rays.push_back(coords[q]);
  }
  Mat R(m, rays.size());
  for (std::size_t k = 0; k < rays.size(); ++k) R.col(k) = rays[k];
  for (const Vec& r : rays) est.extreme_rays.push_back(B * r);

  // slack of sampled directions and distance of all points to the hull cone
  std::size_t stride = std::max<std::size_t>(1, coords.size() / 20000);
  for (std::size_t q = 0; q < coords.size(); q += stride)
    est.hausdorff_slack = std::max(est.hausdorff_slack, distance_to_cone(coords[q], R));
  for (const Vec& y : all_points) est.bounded_distance = std::max(est.bounded_distance, distance_to_cone(y, R));
  for (std::size_t a = 0; a < rays.size(); ++a)
    for (std::size_t b = a + 1; b < rays.size(); ++b)
      est.angular_width = std::max(est.angular_width, std::acos(std::clamp(rays[a].dot(rays[b]), -1.0, 1.0)));
  if (R.cols() > 0) {
    Eigen::JacobiSVD<Mat> svd(R);
    for (int k = 0; k < svd.singularValues().size(); ++k) est.dimension += svd.singularValues()[k] > 1e-6;
  }
  return est;
}

}  // namespace pslab

namespace pslab {

std::vector<Vec> cone_directions(const LimitConeEstimate& cone, int count) {
  const auto& rays = cone.extreme_rays;
  if (rays.empty()) throw Error(ErrorKind::insufficient_data, "limit cone has no extreme rays");
  if (rays.size() == 1 || count <= 1) return {rays[0].normalized()};
  std::size_t a = 0, b = 1;
  double worst = 2;
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      double c = rays[i].normalized().dot(rays[j].normalized());
      if (c < worst) worst = c, a = i, b = j;
    }
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    double t = double(k) / (count - 1);
    out.push_back(((1 - t) * rays[a].normalized() + t * rays[b].normalized()).normalized());
  }
  return out;
}

}  // namespace pslab
