#include "pslab/precise.hpp"

namespace pslab {

QMat to_quad(const Mat& m) {
  QMat q(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

Mat to_double(const QMat& m) {
  Mat d(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d(i, j) = static_cast<double>(m(i, j));
  return d;
}

QMat quad_word_product(const std::vector<QMat>& gens, const std::vector<QMat>& inverses, const Word& w) {
  int d = static_cast<int>(gens.at(0).rows());
  QMat p = QMat::Identity(d, d);
  for (int x : w) {
    int k = std::abs(x) - 1;
    p = p * (x > 0 ? gens.at(k) : inverses.at(k));
  }
  return p;
}

QVec quad_singular_values(const QMat& m, QMat* left) {
  if (left) {
    Eigen::JacobiSVD<QMat> svd(m, Eigen::ComputeFullU);
    *left = svd.matrixU();
    return svd.singularValues();
  }
  Eigen::JacobiSVD<QMat> svd(m);
  return svd.singularValues();
}

QMat quad_qr_frame(const QMat& m, QVec* log_diag) {
  Eigen::HouseholderQR<QMat> qr(m);
  QMat q = qr.householderQ();
  QVec r = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r[j] < 0) q.col(j) *= -1;
  if (log_diag) {
    log_diag->resize(r.size());
    for (Eigen::Index j = 0; j < r.size(); ++j) (*log_diag)[j] = boost::multiprecision::log(boost::multiprecision::abs(r[j]));
  }
  return q;
}

}  // namespace pslab
