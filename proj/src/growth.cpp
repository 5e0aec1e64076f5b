#include "pslab/growth.hpp"

#include <algorithm>
#include <numeric>

namespace pslab {

namespace {

struct Neumaier {
  double sum = 0, comp = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double ls_slope(const double* t, const double* y, std::size_t n) {
  double mt = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mt += t[k];
    my += y[k];
  }
  mt /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (t[k] - mt) * (t[k] - mt);
    sxy += (t[k] - mt) * (y[k] - my);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

ExponentEstimate minus_infinity(double tlo, double thi, int nlo, int L) {
  ExponentEstimate e;
  e.value = e.ci_low = e.ci_high = kMinusInfinity;
  e.t_low = tlo;
  e.t_high = thi;
  e.length_low = nlo;
  e.length_high = L;
  return e;
}

}  // namespace

double poincare_partial_sum(const OrbitBall& ball, const LinearForm& psi, double s) {
  if (psi.theta().d() != ball.d()) throw Error(ErrorKind::signature, "form and ball have different d");
  Neumaier acc;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    double x = -s * psi.eval(ball.mu(i));
    if (x > 700.0) throw Error(ErrorKind::saturation, "partial sum term exceeds double range (s*psi very negative)");
    acc.add(std::exp(x));
  }
  return acc.value();
}

std::vector<double> form_values(const OrbitBall& ball, const LinearForm& psi, double tol) {
  if (psi.theta().d() != ball.d()) throw Error(ErrorKind::signature, "form and ball have different d");
  std::vector<double> v(ball.size());
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    v[i] = psi.eval(ball.mu(i));
    if (v[i] < -tol) {
      if (bad.size() < 20) bad.push_back(ball.word_string(i));
      else if (bad.size() == 20) bad.push_back("...");
    }
  }
  if (!bad.empty())
    throw PropernessViolation("linear form is negative on " + std::to_string(bad.size()) + "+ ball elements", bad);
  return v;
}

ExponentEstimate counting_exponent(const std::vector<double>& values, const std::vector<int>& lengths,
                                   const std::vector<double>& reference_values,
                                   const std::vector<int>& reference_lengths, int L, const ExponentOptions& opts) {
  (void)lengths;
  if (L < 2) throw Error(ErrorKind::insufficient_data, "exponent estimate needs word length L >= 2");
  std::vector<double> tmin(L + 1, INFINITY);
  std::vector<std::size_t> sphere(L + 1, 0);
  for (std::size_t k = 0; k < reference_values.size(); ++k) {
    int n = reference_lengths[k];
    if (n < 0 || n > L) continue;
    tmin[n] = std::min(tmin[n], reference_values[k]);
    ++sphere[n];
  }
  const int nlo = (L + 1) / 2;
  const double tlo = tmin[nlo], thi = tmin[L];
  if (!(std::isfinite(tlo) && std::isfinite(thi) && thi > tlo))
    throw Error(ErrorKind::insufficient_data, "fit window is empty (values do not grow with word length)");

  // tied values (frequent, by symmetry) must land on the same side of both ends
  const double lo_cut = tlo - 1e-9 * (1 + std::abs(tlo)), hi_cut = thi + 1e-9 * (1 + std::abs(thi));
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values)
    if (x <= hi_cut) v.push_back(x);
  std::sort(v.begin(), v.end());
  if (v.empty()) return minus_infinity(tlo, thi, nlo, L);

  ExponentEstimate e;
  e.t_low = tlo;
  e.t_high = thi;
  e.length_low = nlo;
  e.length_high = L;

  if (opts.detect_polynomial && L >= 4 && sphere[nlo] > 0) {
    double ratio = double(sphere[L]) / double(sphere[nlo]);
    double poly = std::pow(double(L) / nlo, 3.0);
    if (ratio <= poly) {
      e.value = e.ci_low = e.ci_high = 0.0;
      e.polynomial = true;
      e.points = v.size();
      return e;
    }
  }

  std::vector<double> t, y;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] >= lo_cut) {
      t.push_back(v[k]);
      y.push_back(std::log(double(k + 1)));
    }
  if (t.size() < static_cast<std::size_t>(std::max(2, opts.min_points))) {
    if (opts.min_points <= 2) return minus_infinity(tlo, thi, nlo, L);
    throw Error(ErrorKind::insufficient_data, "too few points in the fit window (" + std::to_string(t.size()) + ")");
  }
  if (static_cast<int>(t.size()) > opts.max_points) {
    std::vector<double> ts, ys;
    std::size_t P = t.size();
    for (int j = 0; j < opts.max_points; ++j) {
      std::size_t k = static_cast<std::size_t>(std::llround(double(j) * (P - 1) / (opts.max_points - 1)));
      ts.push_back(t[k]);
      ys.push_back(y[k]);
    }
    t.swap(ts);
    y.swap(ys);
  }
  const std::size_t P = t.size();
  e.points = P;
  e.value = ls_slope(t.data(), y.data(), P);

  // moving-block bootstrap over the ordered window
  const std::size_t nb = std::min<std::size_t>(16, P);
  const std::size_t blen = (P + nb - 1) / nb;
  Rng rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, P - 1);
  std::vector<double> slopes;
  std::vector<double> bt, by;
  for (int b = 0; b < opts.bootstrap; ++b) {
    bt.clear();
    by.clear();
    for (std::size_t k = 0; k < nb; ++k) {
      std::size_t s0 = pick(rng);
      for (std::size_t q = 0; q < blen; ++q) {
        std::size_t idx = (s0 + q) % P;
        bt.push_back(t[idx]);
        by.push_back(y[idx]);
      }
    }
    slopes.push_back(ls_slope(bt.data(), by.data(), bt.size()));
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    auto q = [&](double p) { return slopes[static_cast<std::size_t>(std::floor(p * (slopes.size() - 1)))]; };
    e.ci_low = std::min(q(0.025), e.value);
    e.ci_high = std::max(q(0.975), e.value);
  } else {
    e.ci_low = e.ci_high = e.value;
  }
  return e;
}

ExponentEstimate critical_exponent(const OrbitBall& ball, const LinearForm& psi, const ExponentOptions& opts) {
  std::vector<double> v = form_values(ball, psi, opts.properness_tol);
  std::vector<int> len(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) len[i] = ball.length(i);
  return counting_exponent(v, len, v, len, ball.max_length(), opts);
}

namespace {

std::vector<double> theta_norms(const OrbitBall& ball, const ThetaSet& theta) {
  std::vector<double> v(ball.size());
  std::vector<double> buf(ball.d());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    std::copy(ball.mu(i), ball.mu(i) + ball.d(), buf.begin());
    p_theta_inplace(buf.data(), theta);
    double s = 0;
    for (double x : buf) s += x * x;
    v[i] = std::sqrt(s);
  }
  return v;
}

std::vector<int> ball_lengths(const OrbitBall& ball) {
  std::vector<int> len(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) len[i] = ball.length(i);
  return len;
}

}  // namespace

ExponentEstimate norm_exponent(const OrbitBall& ball, const ThetaSet& theta, const ExponentOptions& opts) {
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "theta and ball have different d");
  std::vector<double> v = theta_norms(ball, theta);
  std::vector<int> len = ball_lengths(ball);
  return counting_exponent(v, len, v, len, ball.max_length(), opts);
}

double critical_exponent_bisection(const OrbitBall& ball, const LinearForm& psi, const ExponentOptions& opts) {
  std::vector<double> v = form_values(ball, psi, opts.properness_tol);
  const int L = ball.max_length();
  if (L < 2) throw Error(ErrorKind::insufficient_data, "bisection needs word length L >= 2");
  std::vector<double> tmin(L + 1, INFINITY);
  for (std::size_t i = 0; i < ball.size(); ++i) tmin[ball.length(i)] = std::min(tmin[ball.length(i)], v[i]);
  const double tlo = tmin[(L + 1) / 2], thi = tmin[L];
  if (!(thi > tlo)) throw Error(ErrorKind::insufficient_data, "fit window is empty");
  const double mid = 0.5 * (tlo + thi);
  std::vector<double> lower, upper;
  for (double x : v) {
    if (x >= tlo - 1e-9 * (1 + std::abs(tlo)) && x <= mid) lower.push_back(x);
    else if (x > mid && x <= thi + 1e-9 * (1 + std::abs(thi))) upper.push_back(x);
  }
  if (lower.empty() || upper.empty()) throw Error(ErrorKind::insufficient_data, "fit window halves are empty");
  auto logsum = [](const std::vector<double>& xs, double s) {
    double m = -INFINITY;
    for (double x : xs) m = std::max(m, -s * x);
    Neumaier acc;
    for (double x : xs) acc.add(std::exp(-s * x - m));
    return m + std::log(acc.value());
  };
  auto g = [&](double s) { return logsum(upper, s) - logsum(lower, s); };
  if (g(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 60 && g(hi) > 0; ++k) hi *= 2;
  for (int k = 0; k < 200; ++k) {
    double m = 0.5 * (lo + hi);
    if (g(m) > 0) lo = m;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

// ---- cones

ConeSpec::ConeSpec(ThetaSet th, Vec u, std::vector<double> eps)
    : theta(std::move(th)), direction(std::move(u)), apertures(std::move(eps)) {
  if (direction.size() != theta.d()) throw Error(ErrorKind::signature, "cone direction has wrong length");
  double n = direction.norm();
  if (!(std::abs(n - 1.0) <= 1e-9)) throw Error(ErrorKind::precondition, "cone direction must be a unit vector");
  Vec p = direction;
  p_theta_inplace(p.data(), theta);
  if ((p - direction).norm() > 1e-9 || std::abs(direction.sum()) > 1e-9)
    throw Error(ErrorKind::precondition, "cone direction must lie in a_theta");
  for (std::size_t k = 0; k < apertures.size(); ++k) {
    if (!(apertures[k] > 0)) throw Error(ErrorKind::precondition, "apertures must be positive");
    if (k && !(apertures[k] < apertures[k - 1]))
      throw Error(ErrorKind::precondition, "apertures must be strictly decreasing");
  }
}

std::vector<ApertureEstimate> directional_tau(const OrbitBall& ball, const ConeSpec& cone,
                                              const ExponentOptions& opts) {
  if (cone.theta.d() != ball.d()) throw Error(ErrorKind::signature, "cone and ball have different d");
  const int d = ball.d();
  std::vector<double> norms = theta_norms(ball, cone.theta);
  std::vector<int> len = ball_lengths(ball);
  // distance of each normalized mu_theta to u
  std::vector<double> dist(ball.size(), INFINITY);
  std::vector<double> buf(d);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (norms[i] < 1e-12) continue;
    std::copy(ball.mu(i), ball.mu(i) + d, buf.begin());
    p_theta_inplace(buf.data(), cone.theta);
    double s = 0;
    for (int j = 0; j < d; ++j) {
      double x = buf[j] / norms[i] - cone.direction[j];
      s += x * x;
    }
    dist[i] = std::sqrt(s);
  }
  ExponentOptions o = opts;
  o.min_points = 2;
  std::vector<ApertureEstimate> out;
  for (double eps : cone.apertures) {
    std::vector<double> v;
    std::vector<int> l;
    for (std::size_t i = 0; i < ball.size(); ++i)
      if (dist[i] < eps) {
        v.push_back(norms[i]);
        l.push_back(len[i]);
      }
    ApertureEstimate a;
    a.aperture = eps;
    a.count = v.size();
    a.estimate = counting_exponent(v, l, norms, len, ball.max_length(), o);
    out.push_back(a);
  }
  return out;
}

IndicatorGrid growth_indicator(const OrbitBall& ball, const ThetaSet& theta, const std::vector<Vec>& directions,
                               const IndicatorOptions& opts) {
  IndicatorGrid g;
  g.theta = theta;
  g.directions = directions;
  for (const Vec& u : directions) {
    double n = u.norm();
    if (n < 1e-14) {
      g.values.push_back(0.0);
      g.ci_low.push_back(0.0);
      g.ci_high.push_back(0.0);
      g.chosen_aperture.push_back(0.0);
      g.curves.emplace_back();
      continue;
    }
    ConeSpec cone(theta, u / n, opts.apertures);
    auto curve = directional_tau(ball, cone, opts.exponent);
    double val = kMinusInfinity, lo = kMinusInfinity, hi = kMinusInfinity, ap = 0;
    bool any_empty = false;
    for (const auto& a : curve) any_empty = any_empty || a.estimate.empty();
    if (!any_empty && !curve.empty()) {
      std::size_t chosen = curve.size() - 1;
      bool found = false;
      for (std::size_t k = curve.size() - 1; k >= 1 && !found; --k) {
        if (std::abs(curve[k].estimate.value - curve[k - 1].estimate.value) < opts.stabilization_tol) {
          chosen = k;
          found = true;
        }
      }
      val = n * curve[chosen].estimate.value;
      lo = n * curve[chosen].estimate.ci_low;
      hi = n * curve[chosen].estimate.ci_high;
      ap = curve[chosen].aperture;
    }
    g.values.push_back(val);
    g.ci_low.push_back(lo);
    g.ci_high.push_back(hi);
    g.chosen_aperture.push_back(ap);
    g.curves.push_back(std::move(curve));
  }
  return g;
}

TangencyReport tangency_check(const ExponentEstimate& delta, const LinearForm& psi, const IndicatorGrid& grid) {
  TangencyReport r;
  r.delta = delta;
  double best = -INFINITY;
  for (std::size_t k = 0; k < grid.directions.size(); ++k) {
    double hat = grid.values[k];
    CartanVector u = CartanVector::centered(grid.directions[k]);
    double pu = psi(u);
    if (hat == kMinusInfinity) {
      r.margin.push_back(INFINITY);
      continue;
    }
    double slack = (delta.ci_high - delta.ci_low) * std::abs(pu) + (grid.ci_high[k] - grid.ci_low[k]);
    double m = delta.value * pu - hat + slack;
    r.margin.push_back(m);
    if (m < 0) {
      r.pass = false;
      r.violations.push_back(k);
    }
    if (pu > 1e-12 && hat / pu > best) {
      best = hat / pu;
      r.contact_index = static_cast<long>(k);
    }
  }
  r.contact_ratio = r.contact_index >= 0 ? best : 0.0;
  return r;
}

TangencyReport tangency_check(const OrbitBall& ball, const LinearForm& psi, const IndicatorGrid& grid,
                              const ExponentOptions& opts) {
  return tangency_check(critical_exponent(ball, psi, opts), psi, grid);
}

ConcavityReport concavity_check(const IndicatorGrid& grid, double slack) {
  ConcavityReport r;
  const std::size_t n = grid.directions.size();
  std::vector<Vec> unit(n);
  std::vector<double> at_unit(n);
  for (std::size_t k = 0; k < n; ++k) {
    double nn = grid.directions[k].norm();
    unit[k] = nn > 0 ? Vec(grid.directions[k] / nn) : grid.directions[k];
    at_unit[k] = nn > 0 ? grid.values[k] / nn : grid.values[k];
    if (grid.values[k] == kMinusInfinity) at_unit[k] = kMinusInfinity;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      Vec m = 0.5 * (unit[a] + unit[b]);
      double mn = m.norm();
      if (mn < 1e-9) continue;
      Vec mh = m / mn;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b || (unit[c] - mh).norm() > 1e-6) continue;
        ++r.triples;
        double rhs = 0.5 * (at_unit[a] + at_unit[b]);
        if (rhs == kMinusInfinity) continue;
        double lhs = at_unit[c] == kMinusInfinity ? kMinusInfinity : mn * at_unit[c];
        double gap = rhs - slack - lhs;
        if (gap > 0) {
          r.pass = false;
          r.violations.push_back({a, b, c});
          r.worst = std::max(r.worst, gap);
        }
      }
    }
  return r;
}

}  // namespace pslab
