#include <algorithm>
#include <cmath>

#include "pslab/conformal.hpp"
#include "pslab/wedge.hpp"

namespace pslab {

namespace {

// Orthonormal basis of span(x) ∩ span(y) of the given dimension; x and y have orthonormal columns.
Mat intersection_basis(const Mat& x, const Mat& y, int dim) {
  Mat resid = x - y * (y.transpose() * x);
  Eigen::JacobiSVD<Mat> svd(resid, Eigen::ComputeFullV);
  return x * svd.matrixV().rightCols(dim);
}

CartanVector flag_busemann_at_g(const Mat& g, const Mat& frame_of_g_flag, const ThetaSet& theta) {
  // beta_xi(e, g) = -p_theta sigma(g^-1, xi0)
  Mat ginv = g.inverse();
  return p_theta(-iwasawa_sigma(ginv, frame_of_g_flag), theta);
}

Mat qr_frame(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m.cols(); ++i)
    if (r(i, i) < 0) q.col(i) *= -1;
  return q;
}

}  // namespace

GroupElement transverse_pair_element(const PartialFlag& xi, const PartialFlag& eta, double min_margin) {
  double margin = general_position_margin(xi, eta);
  if (!(margin > min_margin))
    throw Error(ErrorKind::ill_conditioned,
                "flags are too close to non-general position (margin " + std::to_string(margin) + ")");
  const int d = xi.d();
  auto cuts = xi.theta().cuts();
  Mat g(d, d);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    int lo = cuts[k - 1], hi = cuts[k];
    Mat x = xi.frame().leftCols(hi);
    Mat y = eta.frame().leftCols(d - lo);
    g.middleCols(lo, hi - lo) = intersection_basis(x, y, hi - lo);
  }
  if (g.determinant() < 0) g.col(0) *= -1;
  return GroupElement(g);
}

double bms_exponent_of(const GroupElement& g, const LinearForm& psi) {
  const ThetaSet& th = psi.theta();
  if (g.dim() != th.d()) throw Error(ErrorKind::signature, "element and form differ in d");
  const Mat& m = g.matrix();
  Mat w0 = longest_weyl_element(th.d());
  CartanVector bx = flag_busemann_at_g(m, qr_frame(m), th);
  CartanVector be = flag_busemann_at_g(m, qr_frame(m * w0), th.iota());
  return psi(bx + opposition_involution(be));
}

double bms_exponent(const PartialFlag& xi, const PartialFlag& eta, const LinearForm& psi) {
  if (xi.theta() != psi.theta()) throw Error(ErrorKind::signature, "flag type differs from the form's theta");
  return bms_exponent_of(transverse_pair_element(xi, eta), psi);
}

GroupElement random_levi(const ThetaSet& theta, Rng& rng, double spread) {
  const int d = theta.d();
  auto cuts = theta.cuts();
  Mat l = Mat::Zero(d, d);
  std::uniform_real_distribution<double> u(-spread, spread);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    int lo = cuts[k - 1], n = cuts[k] - lo;
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    l.block(lo, lo, n, n) =
        random_orthogonal(n, rng) * v.array().exp().matrix().asDiagonal() * random_orthogonal(n, rng);
  }
  if (l.determinant() < 0) l.col(0) *= -1;
  return GroupElement(l);
}

HopfPoint::HopfPoint(PartialFlag x, PartialFlag e, CartanVector v)
    : xi(std::move(x)), eta(std::move(e)), u(std::move(v)) {
  if (u.dim() != xi.d()) throw Error(ErrorKind::signature, "translation part has the wrong dimension");
  if ((p_theta(u, xi.theta()) - u).norm() > 1e-9)
    throw Error(ErrorKind::precondition, "translation part must lie in a_theta");
  margin = general_position_margin(xi, eta);
  if (!(margin > 0)) throw Error(ErrorKind::precondition, "Hopf point needs flags in general position");
}

HopfPoint hopf_act(const GroupElement& gamma, const HopfPoint& x, double margin_tol) {
  if (gamma.dim() != x.xi.d()) throw Error(ErrorKind::signature, "element and point differ in d");
  HopfPoint y;
  y.xi = x.xi.transformed(gamma.matrix());
  y.eta = x.eta.transformed(gamma.matrix());
  // beta_xi(gamma^-1, e) = p_theta sigma(gamma, xi0)
  y.u = x.u + p_theta(iwasawa_sigma(gamma, x.xi.frame()), x.xi.theta());
  y.margin = general_position_margin(y.xi, y.eta);
  y.degenerate = !(y.margin > margin_tol);
  return y;
}

CartanVector busemann_translation(const OrbitBall& ball, std::size_t gamma, const PartialFlag& xi) {
  if (xi.d() != ball.d()) throw Error(ErrorKind::signature, "flag and ball differ in d");
  const int d = ball.d();
  auto cuts = xi.theta().cuts();
  Vec out(d);
  double prev = 0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    int lo = cuts[k - 1], hi = cuts[k];
    double cur = 0;
    if (hi < d) cur = std::log((ball.wedge(gamma, hi) * wedge_of_columns(xi.frame(), hi)).norm());
    for (int i = lo; i < hi; ++i) out[i] = (cur - prev) / (hi - lo);
    prev = cur;
  }
  return CartanVector::centered(out);
}

PropernessReport properness_probe(const OrbitBall& ball, const HopfPoint& x, const LinearForm& phi, double m) {
  if (phi.theta() != x.xi.theta()) throw Error(ErrorKind::signature, "form type differs from the point's theta");
  if (x.xi.d() != ball.d()) throw Error(ErrorKind::signature, "point and ball differ in d");
  const int L = ball.max_length();
  std::vector<double> minima(L + 1, INFINITY);
  std::vector<std::size_t> counts(L + 1, 0);
  PropernessReport rep;
  for (std::size_t g = 0; g < ball.size(); ++g) {
    if (m > 0) {
      double gm = general_position_margin(transformed_flag(ball, g, x.xi), transformed_flag(ball, g, x.eta));
      if (gm < m) continue;
    }
    double v = std::abs(phi(busemann_translation(ball, g, x.xi)));
    int n = ball.length(g);
    minima[n] = std::min(minima[n], v);
    ++counts[n];
    ++rep.passed;
  }
  for (int n = 0; n <= L; ++n) {
    if (counts[n] == 0) continue;
    rep.lengths.push_back(n);
    rep.minima.push_back(minima[n]);
    rep.counts.push_back(counts[n]);
  }
  std::vector<double> top;
  for (std::size_t q = 0; q < rep.lengths.size(); ++q)
    if (2 * rep.lengths[q] >= L) top.push_back(rep.minima[q]);
  rep.increasing_top_half = top.size() >= 2;
  for (std::size_t q = 1; q < top.size(); ++q)
    if (!(top[q] > top[q - 1])) rep.increasing_top_half = false;
  return rep;
}

}  // namespace pslab
