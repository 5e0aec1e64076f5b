#include "pslab/core.hpp"

#include "pslab/wedge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace pslab {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::signature: return "signature";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::properness: return "properness_violation";
    case ErrorKind::partial_ball: return "partial_ball";
    case ErrorKind::ill_conditioned: return "ill_conditioned";
    case ErrorKind::degenerate_attractor: return "degenerate_attractor";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::empty_measure: return "empty_measure";
    case ErrorKind::radius_too_small: return "radius_too_small";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::saturation: return "saturation";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

// ---- CartanVector

CartanVector::CartanVector(Vec entries) : v_(std::move(entries)) {
  if (v_.size() < 2) throw Error(ErrorKind::precondition, "Cartan vector needs d >= 2");
  double s = v_.sum();
  double scale = 1.0 + v_.cwiseAbs().maxCoeff();
  if (!std::isfinite(s)) throw Error(ErrorKind::overflow, "non-finite Cartan vector");
  if (std::abs(s) > 1e-8 * scale)
    throw Error(ErrorKind::precondition, "Cartan vector entries do not sum to zero");
  v_.array() -= s / static_cast<double>(v_.size());
}

CartanVector CartanVector::zero(int d) { return CartanVector(Vec::Zero(d)); }

CartanVector CartanVector::centered(Vec raw) {
  raw.array() -= raw.mean();
  CartanVector c;
  c.v_ = std::move(raw);
  return c;
}

bool CartanVector::dominant(double tol) const {
  for (int i = 0; i + 1 < dim(); ++i)
    if (v_[i] < v_[i + 1] - tol) return false;
  return true;
}

double CartanVector::alpha(int i) const {
  if (i < 1 || i >= dim()) throw Error(ErrorKind::precondition, "simple root index out of range");
  return v_[i - 1] - v_[i];
}

CartanVector CartanVector::sorted_dominant() const {
  Vec s = v_;
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return centered(s);
}

CartanVector CartanVector::operator+(const CartanVector& o) const { return centered(v_ + o.v_); }
CartanVector CartanVector::operator-(const CartanVector& o) const { return centered(v_ - o.v_); }
CartanVector CartanVector::operator-() const { return centered(-v_); }
CartanVector CartanVector::operator*(double c) const { return centered(c * v_); }

// ---- ThetaSet

ThetaSet::ThetaSet(int d, std::vector<int> indices) : d_(d), idx_(std::move(indices)) {
  if (d < 2) throw Error(ErrorKind::precondition, "theta needs d >= 2");
  if (idx_.empty()) throw Error(ErrorKind::precondition, "theta must be non-empty");
  std::sort(idx_.begin(), idx_.end());
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (idx_[k] < 1 || idx_[k] > d - 1)
      throw Error(ErrorKind::precondition, "theta index out of range 1..d-1");
    if (k > 0 && idx_[k] == idx_[k - 1])
      throw Error(ErrorKind::precondition, "theta indices must be distinct");
  }
}

ThetaSet ThetaSet::full(int d) {
  std::vector<int> v;
  for (int i = 1; i < d; ++i) v.push_back(i);
  return ThetaSet(d, v);
}

ThetaSet ThetaSet::single(int d, int i) { return ThetaSet(d, {i}); }

ThetaSet ThetaSet::parse(int d, const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      v.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::precondition, "cannot parse theta entry '" + tok + "'");
    }
  }
  return ThetaSet(d, v);
}

bool ThetaSet::contains(int i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

ThetaSet ThetaSet::iota() const {
  std::vector<int> v;
  for (int i : idx_) v.push_back(d_ - i);
  return ThetaSet(d_, v);
}

std::vector<int> ThetaSet::cuts() const {
  std::vector<int> c{0};
  c.insert(c.end(), idx_.begin(), idx_.end());
  c.push_back(d_);
  return c;
}

std::string ThetaSet::str() const {
  std::string s;
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx_[k]);
  }
  return s;
}

// ---- projections

CartanVector opposition_involution(const CartanVector& v) {
  Vec r = -v.entries().reverse();
  return CartanVector::centered(r);
}

void p_theta_inplace(double* v, const ThetaSet& theta) {
  auto c = theta.cuts();
  for (std::size_t k = 1; k < c.size(); ++k) {
    double m = 0;
    for (int j = c[k - 1]; j < c[k]; ++j) m += v[j];
    m /= (c[k] - c[k - 1]);
    for (int j = c[k - 1]; j < c[k]; ++j) v[j] = m;
  }
}

CartanVector p_theta(const CartanVector& v, const ThetaSet& theta) {
  if (v.dim() != theta.d()) throw Error(ErrorKind::signature, "p_theta: dimension mismatch");
  Vec out = v.entries();
  p_theta_inplace(out.data(), theta);
  return CartanVector::centered(out);
}

// ---- LinearForm

namespace {

Vec fundamental_coweight(int d, int i) {
  Vec w(d);
  for (int j = 0; j < d; ++j) w[j] = j < i ? double(d - i) / d : -double(i) / d;
  return w;
}

Vec root_vector(int d, int i) {
  Vec a = Vec::Zero(d);
  a[i - 1] = 1;
  a[i] = -1;
  return a;
}

}  // namespace

LinearForm::LinearForm(ThetaSet theta, Vec coefficients)
    : theta_(std::move(theta)), c_(std::move(coefficients)) {
  if (c_.size() != theta_.size())
    throw Error(ErrorKind::signature, "linear form: need one coefficient per element of theta");
  int d = theta_.d();
  f_ = Vec::Zero(d);
  for (int k = 0; k < theta_.size(); ++k) {
    Vec a = root_vector(d, theta_.indices()[k]);
    p_theta_inplace(a.data(), theta_);
    f_ += c_[k] * a;
  }
}

LinearForm LinearForm::from_dual(ThetaSet theta, const Vec& f) {
  int d = theta.d();
  if (f.size() != d) throw Error(ErrorKind::signature, "linear form: dual vector has wrong length");
  Vec g = f.array() - f.mean();
  p_theta_inplace(g.data(), theta);
  Vec c(theta.size());
  for (int k = 0; k < theta.size(); ++k) c[k] = g.dot(fundamental_coweight(d, theta.indices()[k]));
  return LinearForm(std::move(theta), c);
}

LinearForm LinearForm::simple_root(int d, int i) {
  return LinearForm(ThetaSet::single(d, i), Vec::Ones(1));
}

double LinearForm::eval(const double* v) const {
  double s = 0;
  for (int j = 0; j < f_.size(); ++j) s += f_[j] * v[j];
  return s;
}

LinearForm LinearForm::scaled(double c) const { return LinearForm(theta_, c * c_); }

LinearForm LinearForm::composed_with_iota() const {
  Vec g = -f_.reverse();
  return from_dual(theta_.iota(), g);
}

std::string LinearForm::str() const {
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < c_.size(); ++k) {
    if (k) os << ",";
    os << c_[k];
  }
  return os.str();
}

// ---- GroupElement

GroupElement::GroupElement(Mat m, std::optional<Word> word) : m_(std::move(m)), word_(std::move(word)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2)
    throw Error(ErrorKind::precondition, "group element must be a square matrix, d >= 2");
  if (!m_.allFinite()) throw Error(ErrorKind::overflow, "group element has non-finite entries");
  int d = dim();
  double det = m_.partialPivLu().determinant();
  if (!std::isfinite(det) || det == 0.0)
    throw Error(ErrorKind::precondition, "matrix is singular");
  if (det < 0 && d % 2 == 0)
    throw Error(ErrorKind::precondition, "negative determinant cannot be normalized in even dimension");
  double scale = std::copysign(std::pow(std::abs(det), 1.0 / d), det);
  m_ /= scale;
}

GroupElement GroupElement::identity(int d) { return trusted(Mat::Identity(d, d), Word{}); }

GroupElement GroupElement::trusted(Mat m, std::optional<Word> word) {
  GroupElement g;
  g.m_ = std::move(m);
  g.word_ = std::move(word);
  return g;
}

GroupElement GroupElement::inverse() const {
  std::optional<Word> w;
  if (word_) {
    Word r(word_->rbegin(), word_->rend());
    for (int& x : r) x = -x;
    w = r;
  }
  return trusted(m_.inverse(), w);
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::signature, "product of elements of different size");
  std::optional<Word> w;
  if (word_ && o.word_) {
    Word r = *word_;
    for (int x : *o.word_) {
      if (!r.empty() && r.back() == -x)
        r.pop_back();
      else
        r.push_back(x);
    }
    w = r;
  }
  return trusted(m_ * o.m_, w);
}

// ---- decompositions

CartanVector cartan_projection(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g);
  const Vec& s = svd.singularValues();
  if (!s.allFinite() || s.minCoeff() <= 0.0)
    throw Error(ErrorKind::overflow, "matrix numerically singular; Cartan projection out of range");
  int d = int(g.rows());
  if (d <= 1 || d > 8 || s[0] < 1e6 * s[d - 1]) return CartanVector::centered(s.array().log().matrix());
  // small singular values lose precision; read partial sums off exterior powers
  Vec mu(d);
  double prev = 0;
  for (int j = 1; j < d; ++j) {
    Mat w = exterior_power(g, j);
    double a = std::log(top_singular_value(w.data(), int(w.rows())));
    mu[j - 1] = a - prev;
    prev = a;
  }
  mu[d - 1] = std::log(std::abs(g.determinant())) - prev;
  if (!mu.allFinite()) throw Error(ErrorKind::overflow, "Cartan projection out of range");
  return CartanVector::centered(mu);
}

CartanVector cartan_projection(const GroupElement& g) { return cartan_projection(g.matrix()); }

CartanDecomposition cartan_decomposition(const GroupElement& g) {
  Eigen::JacobiSVD<Mat> svd(g.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  if (!s.allFinite() || s.minCoeff() <= 0.0)
    throw Error(ErrorKind::overflow, "matrix numerically singular; Cartan projection out of range");
  Mat u = svd.matrixU();
  Mat v = svd.matrixV();
  int d = g.dim();
  if (u.determinant() < 0) {
    u.col(d - 1) *= -1;
    v.col(d - 1) *= -1;
  }
  return {u, CartanVector::centered(s.array().log().matrix()), v.transpose()};
}

CartanVector iwasawa_sigma(const Mat& g, const Mat& frame) {
  if (g.rows() != frame.rows() || frame.rows() != frame.cols())
    throw Error(ErrorKind::signature, "iwasawa_sigma: dimension mismatch");
  Eigen::HouseholderQR<Mat> qr(g * frame);
  Vec r = qr.matrixQR().diagonal().cwiseAbs();
  if (!r.allFinite() || r.minCoeff() <= 0.0)
    throw Error(ErrorKind::overflow, "iwasawa_sigma: singular product");
  return CartanVector::centered(r.array().log().matrix());
}

CartanVector iwasawa_sigma(const GroupElement& g, const Mat& frame) {
  return iwasawa_sigma(g.matrix(), frame);
}

CartanVector busemann_theta(const PartialFlag& xi, const GroupElement& g, const GroupElement& h) {
  if (xi.d() != g.dim() || xi.d() != h.dim())
    throw Error(ErrorKind::signature, "busemann_theta: dimension mismatch");
  const Mat& k = xi.frame();
  CartanVector a = iwasawa_sigma(g.inverse().matrix(), k);
  CartanVector b = iwasawa_sigma(h.inverse().matrix(), k);
  return p_theta(a - b, xi.theta());
}

double symmetric_distance(const GroupElement& g, const GroupElement& h) {
  if (g.dim() != h.dim()) throw Error(ErrorKind::signature, "distance: dimension mismatch");
  Mat q = g.matrix().partialPivLu().solve(h.matrix());
  return cartan_projection(q).norm();
}

Mat longest_weyl_element(int d) {
  Mat w = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) w(i, d - 1 - i) = 1.0;
  // reversal has sign (-1)^{d(d-1)/2}
  if ((d * (d - 1) / 2) % 2 == 1) w(0, d - 1) = -1.0;
  return w;
}

Mat random_orthogonal(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = n(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Vec r = qr.matrixQR().diagonal();
  for (int j = 0; j < d; ++j)
    if (r[j] < 0) q.col(j) *= -1;
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

GroupElement random_sl(int d, Rng& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = u(rng);
  v.array() -= v.mean();
  Mat m = random_orthogonal(d, rng) * v.array().exp().matrix().asDiagonal() * random_orthogonal(d, rng);
  return GroupElement(m);
}

std::string word_string(const Word& w, const std::vector<std::string>& labels) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    int g = std::abs(w[k]) - 1;
    std::string lab = g < static_cast<int>(labels.size()) ? labels[g] : std::string(1, char('a' + g % 26));
    if (w[k] < 0) {
      if (lab.size() == 1 && std::islower(static_cast<unsigned char>(lab[0])))
        lab[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(lab[0])));
      else
        lab += "^-1";
    }
    if (k && (lab.size() > 1)) s += ".";
    s += lab;
  }
  return s;
}

// ---- PartialFlag

PartialFlag::PartialFlag(ThetaSet theta, Mat frame) : theta_(std::move(theta)), frame_(std::move(frame)) {
  int d = theta_.d();
  if (frame_.rows() != d || frame_.cols() != d)
    throw Error(ErrorKind::signature, "flag frame has wrong size");
  double err = (frame_.transpose() * frame_ - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(err <= 1e-9)) throw Error(ErrorKind::precondition, "flag frame is not orthogonal");
}

PartialFlag PartialFlag::standard(const ThetaSet& theta) {
  return PartialFlag(theta, Mat::Identity(theta.d(), theta.d()));
}

PartialFlag PartialFlag::random(const ThetaSet& theta, Rng& rng) {
  return PartialFlag(theta, random_orthogonal(theta.d(), rng));
}

PartialFlag PartialFlag::transformed(const Mat& g) const {
  Eigen::HouseholderQR<Mat> qr(g * frame_);
  Mat q = qr.householderQ();
  Vec r = qr.matrixQR().diagonal();
  for (int j = 0; j < q.cols(); ++j)
    if (r[j] < 0) q.col(j) *= -1;
  // re-orthonormalize against drift
  Eigen::HouseholderQR<Mat> q2(q);
  Mat qq = q2.householderQ();
  Vec r2 = q2.matrixQR().diagonal();
  for (int j = 0; j < qq.cols(); ++j)
    if (r2[j] < 0) qq.col(j) *= -1;
  return PartialFlag(theta_, qq);
}

PartialFlag PartialFlag::recompleted(Rng& rng) const {
  auto c = theta_.cuts();
  Mat f = frame_;
  for (std::size_t k = 1; k < c.size(); ++k) {
    int n = c[k] - c[k - 1];
    Mat r = n == 1 ? Mat::Identity(1, 1) : random_orthogonal(n, rng);
    if (n == 1 && (rng() & 1)) r(0, 0) = -1;
    f.middleCols(c[k - 1], n) = frame_.middleCols(c[k - 1], n) * r;
  }
  return PartialFlag(theta_, f);
}

double PartialFlag::distance(const PartialFlag& o) const {
  if (theta_ != o.theta_) throw Error(ErrorKind::signature, "flags of different type");
  double worst = 0;
  for (int c : theta_.indices()) {
    // sines of principal angles: singular values of (I - P_a) B
    Mat a = subspace(c), b = o.subspace(c);
    Mat resid = b - a * (a.transpose() * b);
    Eigen::JacobiSVD<Mat> svd(resid);
    worst = std::max(worst, svd.singularValues()[0]);
  }
  return worst;
}

}  // namespace pslab
