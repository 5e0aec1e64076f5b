#include "pslab/flags.hpp"

#include <cmath>

#include "pslab/wedge.hpp"

namespace pslab {

namespace {

void check_gaps(const double* mu, const ThetaSet& theta, double gap_tol) {
  for (int c : theta.indices()) {
    double a = mu[c - 1] - mu[c];
    if (!(1.0 - std::exp(-a) > gap_tol))
      throw Error(ErrorKind::degenerate_attractor,
                  "singular value gap at alpha_" + std::to_string(c) + " is below tolerance (alpha = " +
                      std::to_string(a) + ")");
  }
}

}  // namespace

PartialFlag attractor_flag(const Mat& g, const ThetaSet& theta, double gap_tol) {
  if (g.rows() != theta.d()) throw Error(ErrorKind::signature, "attractor_flag: dimension mismatch");
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU);
  Vec s = svd.singularValues();
  if (!(s.minCoeff() > 0)) throw Error(ErrorKind::overflow, "attractor_flag: singular matrix");
  Vec mu = s.array().log().matrix();
  check_gaps(mu.data(), theta, gap_tol);
  Mat u = svd.matrixU();
  if (u.determinant() < 0) u.col(u.cols() - 1) *= -1;
  return PartialFlag(theta, u);
}

PartialFlag attractor_flag(const GroupElement& g, const ThetaSet& theta, double gap_tol) {
  return attractor_flag(g.matrix(), theta, gap_tol);
}

bool has_attractor(const OrbitBall& ball, std::size_t i, const ThetaSet& theta, double gap_tol) {
  const double* mu = ball.mu(i);
  for (int c : theta.indices())
    if (!(1.0 - std::exp(-(mu[c - 1] - mu[c])) > gap_tol)) return false;
  return true;
}

PartialFlag attractor_flag(const OrbitBall& ball, std::size_t i, const ThetaSet& theta, double gap_tol) {
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "attractor_flag: dimension mismatch");
  check_gaps(ball.mu(i), theta, gap_tol);
  const int d = ball.d();
  std::vector<Mat> nested;
  for (int c : theta.indices()) {
    auto w = ball.wedge(i, c);
    Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeFullU);
    Vec top = svd.matrixU().col(0);
    nested.push_back(subspace_of_wedge(top, d, c));
  }
  return PartialFlag(theta, frame_from_subspaces(nested, d));
}

PartialFlag transformed_flag(const OrbitBall& ball, std::size_t i, const PartialFlag& xi) {
  if (xi.d() != ball.d()) throw Error(ErrorKind::signature, "transformed_flag: dimension mismatch");
  const int d = ball.d();
  std::vector<Mat> nested;
  for (int c : xi.theta().indices()) {
    if (c == d) continue;
    Vec w = ball.wedge(i, c) * wedge_of_columns(xi.frame(), c);
    nested.push_back(subspace_of_wedge(w / w.norm(), d, c));
  }
  return PartialFlag(xi.theta(), frame_from_subspaces(nested, d));
}

double general_position_margin(const PartialFlag& xi, const PartialFlag& eta) {
  if (eta.theta() != xi.theta().iota())
    throw Error(ErrorKind::signature, "general_position_margin: second flag must have type iota(theta)");
  const int d = xi.d();
  double m = 1.0;
  for (int c : xi.theta().indices()) {
    Mat block(d, d);
    block << xi.subspace(c), eta.subspace(d - c);
    Eigen::JacobiSVD<Mat> svd(block);
    m = std::min(m, svd.singularValues()[d - 1]);
  }
  return m;
}

ShadowSpec::ShadowSpec(GroupElement p, GroupElement q, double r, ThetaSet th)
    : viewpoint(std::move(p)), target(std::move(q)), radius(r), theta(std::move(th)) {
  if (!(radius > 0)) throw Error(ErrorKind::precondition, "shadow radius must be positive");
  if (viewpoint.dim() != theta.d() || target.dim() != theta.d())
    throw Error(ErrorKind::signature, "shadow spec: dimension mismatch");
}

// ---- distance from a Weyl cone to a point

namespace {

// Euclidean projection onto the closed dominant cone of the sum-zero hyperplane.
template <class V>
void project_dominant(V& v) {
  const int n = static_cast<int>(v.size());
  v.array() -= v.mean();
  // pool adjacent violators for a non-increasing fit
  double small_val[16];
  int small_cnt[16];
  std::vector<double> big_val;
  std::vector<int> big_cnt;
  double* val = small_val;
  int* cnt = small_cnt;
  if (n > 16) {
    big_val.resize(n);
    big_cnt.resize(n);
    val = big_val.data();
    cnt = big_cnt.data();
  }
  int top = 0;
  for (int i = 0; i < n; ++i) {
    val[top] = v[i];
    cnt[top] = 1;
    ++top;
    while (top > 1 && val[top - 2] < val[top - 1]) {
      double w = val[top - 1] * cnt[top - 1] + val[top - 2] * cnt[top - 2];
      int c = cnt[top - 1] + cnt[top - 2];
      --top;
      val[top - 1] = w / c;
      cnt[top - 1] = c;
    }
  }
  int k = 0;
  for (int b = 0; b < top; ++b)
    for (int q = 0; q < cnt[b]; ++q) v[k++] = val[b];
}

template <int D>
struct FlatObjective {
  using M = Eigen::Matrix<double, D, D>;
  using V = Eigen::Matrix<double, D, 1>;
  M h0;
  V mu;
  double eval(const V& v, V* grad) const {
    V scale = (mu - v).array().exp().matrix();
    M h = scale.asDiagonal() * h0;
    if (!grad) {
      Eigen::JacobiSVD<M> svd(h);
      return svd.singularValues().array().log().square().sum();
    }
    Eigen::JacobiSVD<M> svd(h, Eigen::ComputeFullU);
    V ls = svd.singularValues().array().log().matrix();
    *grad = -2.0 * (svd.matrixU().array().square().matrix() * ls);
    return ls.squaredNorm();
  }
};

template <int D>
FlatDistance minimize_flat(const Mat& h0_in, const Vec& mu_in, const ShadowOptions& opts, double radius_hint,
                           double stop_below) {
  using V = typename FlatObjective<D>::V;
  const int d = static_cast<int>(h0_in.rows());
  FlatObjective<D> obj{h0_in, mu_in};
  const V& mu = obj.mu;
  Rng rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool decide = stop_below >= 0;
  const double stop2 = decide ? stop_below * stop_below : -1.0;

  FlatDistance best;
  best.value = INFINITY;
  bool any_converged = false;
  double best_seen = INFINITY;
  const int starts = std::max(1, opts.multistarts);
  for (int st = 0; st < starts; ++st) {
    V v = mu;
    if (st > 0) {
      V z(d);
      for (int i = 0; i < d; ++i) z[i] = normal(rng);
      z.array() -= z.mean();
      if (z.norm() > 0) v += (std::max(radius_hint, 1e-3) * std::sqrt(double(st) / starts) / z.norm()) * z;
    }
    project_dominant(v);
    V g(d), vn(d);
    double F = obj.eval(v, &g);
    double step = 0.5;
    bool converged = false;
    int it = 0, stalls = 0;
    for (; it < opts.max_iter; ++it) {
      best_seen = std::min(best_seen, F);
      if (decide && F <= stop2) {
        converged = true;
        break;
      }
      if (decide) {
        // convexity: F* >= F + <g, v* - v> and |v* - mu| <= d* <= sqrt(F)
        double reach = std::sqrt(std::max(F, 0.0)) + (v - mu).norm();
        double lower = F - g.norm() * reach;
        if (lower > stop2 * (1 + 1e-9) + 1e-12) {
          best.value = std::sqrt(lower);
          best.v = Vec(v - mu);
          best.iterations = it;
          best.lower_bound = true;
          return best;
        }
      }
      V gm = v - g;
      project_dominant(gm);
      if ((gm - v).norm() <= opts.tol * std::max(1.0, g.norm())) {
        converged = true;
        break;
      }
      double Fn = 0;
      bool accepted = false;
      for (int bt = 0; bt < 80; ++bt) {
        vn = v - step * g;
        project_dominant(vn);
        V dv = vn - v;
        Fn = obj.eval(vn, nullptr);
        if (Fn <= F + g.dot(dv) + dv.squaredNorm() / (2 * step)) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        // no decrease possible at machine precision
        converged = true;
        break;
      }
      // stalled at rounding level
      if (F - Fn <= 1e-14 * (1.0 + F) && (vn - v).norm() <= 1e-12 * (1.0 + v.norm())) {
        if (++stalls >= 3) {
          converged = true;
          break;
        }
      } else {
        stalls = 0;
      }
      v = vn;
      F = obj.eval(v, &g);
      step = std::min(step * 2.0, 1e3);
    }
    if (converged) {
      any_converged = true;
      if (std::sqrt(std::max(F, 0.0)) < best.value) {
        best.value = std::sqrt(std::max(F, 0.0));
        best.v = Vec(v - mu);
        best.iterations = it;
      }
      // convex objective: one converged start settles the question unless it sits on the threshold
      if (decide && std::abs(best.value - stop_below) > 1e-6) break;
    }
  }
  if (!any_converged)
    throw NumericError("flat distance minimization did not converge", std::sqrt(std::max(best_seen, 0.0)));
  return best;
}

}  // namespace

FlatDistance flat_distance(const Mat& h0, const Vec& mu, const ShadowOptions& opts, double radius_hint) {
  return flat_distance_until(h0, mu, opts, radius_hint, -1.0);
}

FlatDistance flat_distance_until(const Mat& h0, const Vec& mu, const ShadowOptions& opts, double radius_hint,
                                 double stop_below) {
  switch (h0.rows()) {
    case 2: return minimize_flat<2>(h0, mu, opts, radius_hint, stop_below);
    case 3: return minimize_flat<3>(h0, mu, opts, radius_hint, stop_below);
    case 4: return minimize_flat<4>(h0, mu, opts, radius_hint, stop_below);
    default: return minimize_flat<Eigen::Dynamic>(h0, mu, opts, radius_hint, stop_below);
  }
}

double log_singular_norm(const Mat& h) {
  switch (h.rows()) {
    case 2: return Eigen::JacobiSVD<Eigen::Matrix2d>(Eigen::Matrix2d(h)).singularValues().array().log().matrix().norm();
    case 3: return Eigen::JacobiSVD<Eigen::Matrix3d>(Eigen::Matrix3d(h)).singularValues().array().log().matrix().norm();
    case 4: return Eigen::JacobiSVD<Eigen::Matrix4d>(Eigen::Matrix4d(h)).singularValues().array().log().matrix().norm();
    default: return Eigen::JacobiSVD<Mat>(h).singularValues().array().log().matrix().norm();
  }
}

}  // namespace pslab
