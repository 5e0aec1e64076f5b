#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pslab/error.hpp"

namespace pslab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Generator k (0-based) is written k+1, its inverse -(k+1).
using Word = std::vector<int>;
using Rng = std::mt19937_64;

// A point of the Cartan subalgebra: sum-zero vector of length d.
class CartanVector {
 public:
  CartanVector() = default;
  // Throws if the entries are visibly not sum-zero, then recenters exactly.
  explicit CartanVector(Vec entries);
  static CartanVector zero(int d);
  // Subtracts the mean; never throws.
  static CartanVector centered(Vec raw);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vec& entries() const { return v_; }
  double operator[](int i) const { return v_[i]; }

  bool dominant(double tol = 0.0) const;
  double norm() const { return v_.norm(); }
  // Simple root alpha_i, 1 <= i <= d-1.
  double alpha(int i) const;
  CartanVector sorted_dominant() const;

  CartanVector operator+(const CartanVector& o) const;
  CartanVector operator-(const CartanVector& o) const;
  CartanVector operator-() const;
  CartanVector operator*(double c) const;

 private:
  Vec v_;
};

// Non-empty set of simple roots, stored as sorted 1-based indices.
class ThetaSet {
 public:
  ThetaSet() = default;
  ThetaSet(int d, std::vector<int> indices);
  static ThetaSet full(int d);
  static ThetaSet single(int d, int i);
  // "1,2" style list.
  static ThetaSet parse(int d, const std::string& text);

  int d() const { return d_; }
  const std::vector<int>& indices() const { return idx_; }
  int size() const { return static_cast<int>(idx_.size()); }
  bool contains(int i) const;
  bool is_full() const { return size() == d_ - 1; }
  ThetaSet iota() const;
  // 0 = c_0 < c_1 < ... < c_m = d, the cut points of the block structure.
  std::vector<int> cuts() const;
  std::string str() const;
  bool operator==(const ThetaSet& o) const { return d_ == o.d_ && idx_ == o.idx_; }
  bool operator!=(const ThetaSet& o) const { return !(*this == o); }

 private:
  int d_ = 0;
  std::vector<int> idx_;
};

// Norms on a are Euclidean in the diagonal entries. The Killing form of sl_d restricts
// to B(H, H) = killing_scale(d) * |H|^2 there; nothing in the library applies it.
inline double killing_scale(int d) { return 2.0 * d; }

CartanVector opposition_involution(const CartanVector& v);
CartanVector p_theta(const CartanVector& v, const ThetaSet& theta);
// In place variant on raw sum-zero data.
void p_theta_inplace(double* v, const ThetaSet& theta);

// Functional on a_theta, coefficients c_i = psi(w_i) for i in theta.
class LinearForm {
 public:
  LinearForm() = default;
  LinearForm(ThetaSet theta, Vec coefficients);
  // psi(v) = <f, p_theta(v)>.
  static LinearForm from_dual(ThetaSet theta, const Vec& f);
  static LinearForm simple_root(int d, int i);

  const ThetaSet& theta() const { return theta_; }
  const Vec& coefficients() const { return c_; }
  // Representing vector in a_theta.
  const Vec& dual() const { return f_; }

  double operator()(const CartanVector& v) const { return f_.dot(v.entries()); }
  double eval(const double* v) const;
  double norm() const { return f_.norm(); }
  LinearForm scaled(double c) const;
  // psi o iota, a form on a_{iota(theta)}.
  LinearForm composed_with_iota() const;
  std::string str() const;

 private:
  ThetaSet theta_;
  Vec c_;
  Vec f_;
};

class GroupElement {
 public:
  GroupElement() = default;
  // Rescales by det^{1/d}; throws when that is impossible.
  explicit GroupElement(Mat m, std::optional<Word> word = std::nullopt);
  static GroupElement identity(int d);
  // No renormalization, for matrices already known to have det 1.
  static GroupElement trusted(Mat m, std::optional<Word> word = std::nullopt);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  const std::optional<Word>& word() const { return word_; }
  GroupElement inverse() const;
  GroupElement operator*(const GroupElement& o) const;

 private:
  Mat m_;
  std::optional<Word> word_;
};

struct CartanDecomposition {
  Mat k_left;  // g = k_left * diag(exp(mu)) * k_right
  CartanVector mu;
  Mat k_right;
};

CartanVector cartan_projection(const GroupElement& g);
CartanVector cartan_projection(const Mat& g);
CartanDecomposition cartan_decomposition(const GroupElement& g);

// log of the positive diagonal of R in g*k = QR.
CartanVector iwasawa_sigma(const GroupElement& g, const Mat& frame);
CartanVector iwasawa_sigma(const Mat& g, const Mat& frame);

class PartialFlag;
CartanVector busemann_theta(const PartialFlag& xi, const GroupElement& g,
                            const GroupElement& h);

double symmetric_distance(const GroupElement& g, const GroupElement& h);

Mat longest_weyl_element(int d);
Mat random_orthogonal(int d, Rng& rng);
// k1 exp(v) k2 with v uniform in a box of half-width spread.
GroupElement random_sl(int d, Rng& rng, double spread = 1.0);

std::string word_string(const Word& w, const std::vector<std::string>& labels = {});

}  // namespace pslab

#include "pslab/partial_flag.hpp"
