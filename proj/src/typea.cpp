#include "pslab/typea.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "pslab/wedge.hpp"

namespace pslab {

namespace {

void check_index(int d, int i) {
  if (d < 2 || i < 1 || i > d - 1) throw Error(ErrorKind::precondition, "need 1 <= i <= d-1");
}

// 2 * quint_upper_bound of the integer vector W.
long long twice_quint(const std::vector<long long>& W) {
  int d = static_cast<int>(W.size());
  long long s = 0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) s += 2 * (W[a] - W[b]);
  for (int a = 0; a < d / 2; ++a) s -= W[a] - W[d - 1 - a];
  return s;
}

}  // namespace

CartanVector w_vector(int d, int i) {
  check_index(d, i);
  Vec w(d);
  for (int j = 0; j < d; ++j) w[j] = j < i ? double(d - i) / d : -double(i) / d;
  return CartanVector(w);
}

CartanVector p_alpha_closed_form(int d, int i, const CartanVector& t) {
  check_index(d, i);
  if (t.dim() != d) throw Error(ErrorKind::signature, "p_alpha_closed_form: wrong dimension");
  double s = 0;
  for (int j = 0; j < i; ++j) s += t[j];
  double c = d * s / (double(i) * (d - i));
  return w_vector(d, i) * c;
}

double quint_upper_bound(const CartanVector& t) {
  int d = t.dim();
  double s = 0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) s += t[a] - t[b];
  double h = 0;
  for (int a = 0; a < d / 2; ++a) h += t[a] - t[d - 1 - a];
  return s - 0.5 * h;
}

QuintBound quint_alpha_bound_detail(int d, int i) {
  check_index(d, i);
  // The constraint set is the simplex with vertices w_k / c_k, where c_k is the
  // value of the constraint functional on w_k.
  long long best_num = 0, best_den = 1;
  int best_k = -1;
  for (int k = 1; k < d; ++k) {
    std::vector<long long> W(d);
    for (int j = 0; j < d; ++j) W[j] = j < k ? d - k : -k;
    // f(w_k) = twice_quint(W) / (2d); c_k = p/q
    long long p = k >= i ? d - k : k;
    long long q = k >= i ? d - i : i;
    long long num = twice_quint(W) * q;
    long long den = 2LL * d * p;
    if (best_k < 0 || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_k = k;
    }
  }
  QuintBound out;
  long long g = std::gcd(best_num, best_den);
  out.value = double(best_num / g) / double(best_den / g);
  {
    long long p = best_k >= i ? d - best_k : best_k;
    long long q = best_k >= i ? d - i : i;
    out.argmax = w_vector(d, best_k) * (double(q) / double(p));
  }

  // barycentric grid over the simplex as an independent sanity check
  std::vector<Vec> verts;
  for (int k = 1; k < d; ++k) {
    double c = k >= i ? double(d - k) / (d - i) : double(k) / i;
    verts.push_back(w_vector(d, k).entries() / c);
  }
  int m = d <= 5 ? 24 : 10;
  double best_grid = -INFINITY;
  std::vector<int> comp(verts.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == verts.size()) {
      comp[pos] = left;
      Vec t = Vec::Zero(d);
      for (std::size_t a = 0; a < verts.size(); ++a) t += (double(comp[a]) / m) * verts[a];
      best_grid = std::max(best_grid, quint_upper_bound(CartanVector::centered(t)));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      comp[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, m);
  out.grid_value = best_grid;
  if (best_grid > out.value + 1e-9)
    throw NumericError("quint bound: grid exceeds vertex maximum", best_grid);
  return out;
}

double quint_alpha_bound(int d, int i) { return quint_alpha_bound_detail(d, i).value; }

HitchinBound hitchin_bound_detail(int d, int i) {
  check_index(d, i);
  HitchinBound out;
  out.value = double(std::max(i, d - i)) / (d - 1);
  // t_1 = X, t_2..t_i = x, t_{i+1}..t_{d-1} = y, t_d = Y
  const double S = double(i) * (d - i) / d;
  const bool has_x = i >= 2, has_y = d - 1 - i >= 1;
  auto objective = [&](double x, double y, bool* ok) {
    double X = S - (i - 1) * x;
    double Y = -S - (d - 1 - i) * y;
    double first_low = has_x ? x : (has_y ? y : Y);
    double last_high = has_y ? y : (has_x ? x : X);
    *ok = X >= first_low - 1e-15 && last_high >= Y - 1e-15 && (!has_x || !has_y || x >= y - 1e-15);
    return (X - Y) / (d - 1);
  };
  const double lo = -double(i) / d, hi = double(d - i) / d;
  const int n = 2000;
  double best = -INFINITY;
  for (int a = 0; a <= (has_x ? n : 0); ++a)
    for (int b = 0; b <= (has_y ? n : 0); ++b) {
      double x = lo + (hi - lo) * a / n, y = lo + (hi - lo) * b / n;
      bool ok;
      double v = objective(x, y, &ok);
      if (ok) best = std::max(best, v);
    }
  out.brute = best;
  double line = -INFINITY;
  for (int a = 0; a <= 100000; ++a) {
    double x = lo + (hi - lo) * a / 100000.0;
    bool ok;
    double v = objective(x, x, &ok);
    if (ok) line = std::max(line, v);
  }
  out.line = line;
  out.gap = std::max(std::abs(out.brute - out.value), std::abs(out.line - out.value));
  return out;
}

double hitchin_bound(int d, int i) { return hitchin_bound_detail(d, i).value; }

LinearForm rho_form(int d, const ThetaSet& theta) {
  if (theta.d() != d) throw Error(ErrorKind::signature, "rho_form: theta for wrong d");
  Vec c(theta.size());
  for (int k = 0; k < theta.size(); ++k) {
    Vec w = w_vector(d, theta.indices()[k]).entries();
    double s = 0;
    for (int j = 0; j < d; ++j) s += (d - 1 - 2 * j) * w[j];
    c[k] = s;
  }
  return LinearForm(theta, c);
}

GroupElement irreducible_rep(const Mat& g, int d) {
  if (g.rows() != 2 || g.cols() != 2) throw Error(ErrorKind::precondition, "irreducible_rep needs a 2x2 matrix");
  if (std::abs(g.determinant() - 1.0) > 1e-8) throw Error(ErrorKind::precondition, "input is not in SL_2");
  if (d < 2) throw Error(ErrorKind::precondition, "irreducible_rep needs d >= 2");
  const int n = d - 1;
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), e = g(1, 1);
  Mat m = Mat::Zero(d, d);
  for (int k = 0; k <= n; ++k)
    for (int p = 0; p <= n - k; ++p)
      for (int q = 0; q <= k; ++q) {
        double coef = binomial(n - k, p) * binomial(k, q) * std::pow(a, n - k - p) * std::pow(c, p) *
                      std::pow(b, k - q) * std::pow(e, q);
        m(p + q, k) += coef;
      }
  Vec s(d);
  for (int r = 0; r <= n; ++r) s[r] = std::sqrt(double(binomial(n, r)));
  Mat t = s.cwiseInverse().asDiagonal() * m * s.asDiagonal();
  return GroupElement::trusted(t);
}

GroupElement irreducible_rep(const GroupElement& g, int d) {
  GroupElement out = irreducible_rep(g.matrix(), d);
  return GroupElement::trusted(out.matrix(), g.word());
}

TypeAConstants type_a_constants(int d, int i) {
  TypeAConstants c;
  c.d = d;
  c.i = i;
  c.w = w_vector(d, i);
  c.quint = quint_alpha_bound(d, i);
  c.hitchin = hitchin_bound(d, i);
  return c;
}

}  // namespace pslab
