#pragma once

// Quad-precision helpers for words whose condition number exceeds double range.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include "pslab/core.hpp"

namespace pslab {

using quad = boost::multiprecision::float128;
using QMat = Eigen::Matrix<quad, Eigen::Dynamic, Eigen::Dynamic>;
using QVec = Eigen::Matrix<quad, Eigen::Dynamic, 1>;

QMat to_quad(const Mat& m);
Mat to_double(const QMat& m);

// Product of letters, left to right; letter_matrices[k] = generator k, inverses[k] its inverse.
QMat quad_word_product(const std::vector<QMat>& gens, const std::vector<QMat>& inverses, const Word& w);

// Singular values (descending), optionally left singular vectors.
QVec quad_singular_values(const QMat& m, QMat* left = nullptr);

// Q factor with positive diagonal of R; optional log|diag R|.
QMat quad_qr_frame(const QMat& m, QVec* log_diag = nullptr);

}  // namespace pslab
