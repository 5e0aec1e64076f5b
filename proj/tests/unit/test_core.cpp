#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pslab/fixtures.hpp"
#include "pslab/typea.hpp"
#include "support.hpp"

using namespace pslab;
using namespace testing_support;

namespace {

Mat diag3(double a, double b, double c) {
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = std::exp(a);
  m(1, 1) = std::exp(b);
  m(2, 2) = std::exp(c);
  return m;
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("cartan projection examples") {
  CHECK(max_abs(cartan_projection(GroupElement(diag3(1, 0, -1))).entries() - vec({1, 0, -1})) < 1e-14);
  CHECK(max_abs(cartan_projection(GroupElement::identity(4)).entries()) < 1e-15);

  Mat g(2, 2);
  g << 2, 1, 1, 1;
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  double top = std::log(es.eigenvalues().maxCoeff());
  double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(top == doctest::Approx(2 * std::log(phi)).epsilon(1e-14));
  CartanVector mu = cartan_projection(GroupElement(g));
  CHECK(mu[0] == doctest::Approx(top).epsilon(1e-13));
  CHECK(mu[1] == doctest::Approx(-top).epsilon(1e-13));
  CHECK(mu.dominant());
}

TEST_CASE("cartan decomposition reassembles the matrix") {
  Rng rng(11);
  for (int d : {2, 3, 5}) {
    Mat g = random_sl_matrix(d, rng);
    CartanDecomposition cd = cartan_decomposition(GroupElement(g));
    Mat back = cd.k_left * cd.mu.entries().array().exp().matrix().asDiagonal() * cd.k_right;
    CHECK((back - g).norm() < 1e-10 * g.norm());
  }
}

TEST_CASE("opposition involution") {
  CHECK(max_abs(opposition_involution(CartanVector(vec({1, 0, -1}))).entries() - vec({1, 0, -1})) == 0);
  CHECK(max_abs(opposition_involution(CartanVector(vec({2, -1, -1}))).entries() - vec({1, 1, -2})) == 0);
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    CartanVector v(random_sum_zero(5, rng));
    CHECK(max_abs((opposition_involution(opposition_involution(v)) - v).entries()) < 1e-15);
  }
}

TEST_CASE("mu of the inverse is the opposite, and mu is bi-K-invariant") {
  Rng rng(5);
  for (int d : {2, 3, 4, 6}) {
    for (int k = 0; k < 50; ++k) {
      GroupElement g = random_sl(d, rng, 2.0);
      CartanVector a = cartan_projection(g.inverse());
      CartanVector b = opposition_involution(cartan_projection(g));
      CHECK(max_abs((a - b).entries()) < 1e-9);
      Mat k1 = random_orthogonal(d, rng), k2 = random_orthogonal(d, rng);
      CartanVector c = cartan_projection(Mat(k1 * g.matrix() * k2));
      CHECK(max_abs((c - cartan_projection(g)).entries()) < 1e-9);
    }
  }
}

TEST_CASE("p_theta examples and block-average oracle") {
  CartanVector p = p_theta(CartanVector(vec({1, 0, -1})), ThetaSet(3, {1}));
  CHECK(max_abs(p.entries() - vec({1, -0.5, -0.5})) < 1e-15);

  Rng rng(17);
  for (int d = 2; d <= 6; ++d) {
    CartanVector v(random_sum_zero(d, rng));
    CHECK(max_abs((p_theta(v, ThetaSet::full(d)) - v).entries()) < 1e-15);
    for (int i = 1; i < d; ++i) {
      CartanVector w = w_vector(d, i);
      CHECK(max_abs((p_theta(w, ThetaSet::single(d, i)) - w).entries()) < 1e-14);
    }
  }
  // every theta, against block averages
  for (int d = 2; d <= 6; ++d) {
    for (int mask = 1; mask < (1 << (d - 1)); ++mask) {
      std::vector<int> idx;
      for (int i = 1; i < d; ++i)
        if (mask & (1 << (i - 1))) idx.push_back(i);
      ThetaSet th(d, idx);
      for (int k = 0; k < 20; ++k) {
        CartanVector v(random_sum_zero(d, rng));
        CartanVector pv = p_theta(v, th);
        CHECK(max_abs(pv.entries() - block_average(v.entries(), idx)) < 1e-12);
        CHECK(max_abs((p_theta(pv, th) - pv).entries()) < 1e-13);
      }
    }
  }
}

TEST_CASE("p_theta against the closed form for single roots") {
  Rng rng(23);
  for (int d = 2; d <= 8; ++d)
    for (int i = 1; i < d; ++i)
      for (int k = 0; k < 60; ++k) {
        CartanVector v(random_sum_zero(d, rng));
        CartanVector a = p_theta(v, ThetaSet::single(d, i));
        CartanVector b = p_alpha_closed_form(d, i, v);
        CHECK(max_abs((a - b).entries()) < 1e-12);
      }
}

TEST_CASE("linear forms are p_theta invariant") {
  Rng rng(29);
  ThetaSet th(4, {1, 3});
  LinearForm psi(th, vec({0.7, 1.3}));
  for (int k = 0; k < 50; ++k) {
    CartanVector v(random_sum_zero(4, rng));
    CHECK(psi(p_theta(v, th)) == doctest::Approx(psi(v)).epsilon(1e-12));
  }
  // coefficients are the values on w_i
  CHECK(psi(w_vector(4, 1)) == doctest::Approx(0.7));
  CHECK(psi(w_vector(4, 3)) == doctest::Approx(1.3));
  // on a_theta the form is t_1 - t_2
  CHECK(LinearForm::simple_root(3, 1)(CartanVector(vec({2, -1, -1}))) == doctest::Approx(3.0));
  CHECK(LinearForm::simple_root(3, 1)(CartanVector(vec({2, 0.5, -2.5}))) == doctest::Approx(3.0));
}

TEST_CASE("group elements are renormalized to determinant one") {
  Mat m = 2.0 * Mat::Identity(3, 3);
  GroupElement g(m);
  CHECK(g.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(GroupElement(Mat::Zero(2, 2)), Error);
}

TEST_CASE("iwasawa sigma examples") {
  ThetaSet full = ThetaSet::full(3);
  Mat frame = Mat::Identity(3, 3);
  CartanVector s = iwasawa_sigma(GroupElement(diag3(2, 0.5, -2.5)), frame);
  CHECK(max_abs(s.entries() - vec({2, 0.5, -2.5})) < 1e-14);

  Rng rng(31);
  Mat k = random_orthogonal(4, rng);
  if (k.determinant() < 0) k.col(0) *= -1;
  CHECK(max_abs(iwasawa_sigma(GroupElement(k), random_orthogonal(4, rng)).entries()) < 1e-13);

  // by hand: g e1 = (2, 1) has length sqrt 5; the triangular factor is diag(sqrt5, 1/sqrt5)
  Mat g(2, 2);
  g << 2, 1, 1, 1;
  CartanVector t = iwasawa_sigma(GroupElement(g), Mat::Identity(2, 2));
  CHECK(t[0] == doctest::Approx(std::log(std::sqrt(5.0))).epsilon(1e-14));
  CHECK(t[1] == doctest::Approx(-std::log(std::sqrt(5.0))).epsilon(1e-14));
  (void)full;
}

TEST_CASE("busemann cocycle") {
  Rng rng(37);
  for (int d : {2, 3, 4}) {
    for (int mask = 1; mask < (1 << (d - 1)); ++mask) {
      std::vector<int> idx;
      for (int i = 1; i < d; ++i)
        if (mask & (1 << (i - 1))) idx.push_back(i);
      ThetaSet th(d, idx);
      for (int k = 0; k < 10; ++k) {
        PartialFlag xi = PartialFlag::random(th, rng);
        GroupElement g = random_sl(d, rng), h = random_sl(d, rng), l = random_sl(d, rng);
        CHECK(max_abs(busemann_theta(xi, g, g).entries()) < 1e-12);
        CartanVector lhs = busemann_theta(xi, g, h) + busemann_theta(xi, h, l);
        CHECK(max_abs((lhs - busemann_theta(xi, g, l)).entries()) < 1e-9);
        PartialFlag other = xi.recompleted(rng);
        CHECK(max_abs((busemann_theta(other, g, h) - busemann_theta(xi, g, h)).entries()) < 1e-9);
      }
    }
  }
  // beta at the standard flag: beta(e, a) = p_theta(log a)
  ThetaSet th(3, {1});
  CartanVector b = busemann_theta(PartialFlag::standard(th), GroupElement::identity(3), GroupElement(diag3(2, 0.5, -2.5)));
  CHECK(max_abs(b.entries() - block_average(vec({2, 0.5, -2.5}), {1})) < 1e-13);
}

TEST_CASE("symmetric distance") {
  Rng rng(41);
  Mat k = random_orthogonal(3, rng);
  if (k.determinant() < 0) k.col(0) *= -1;
  CHECK(symmetric_distance(GroupElement::identity(3), GroupElement(k)) < 1e-12);
  CHECK(symmetric_distance(GroupElement::identity(3), GroupElement(diag3(1, 0, -1))) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (int n = 0; n < 30; ++n) {
    GroupElement g = random_sl(3, rng), h = random_sl(3, rng), l = random_sl(3, rng);
    double dgh = symmetric_distance(g, h);
    CHECK(dgh == doctest::Approx(symmetric_distance(h, g)).epsilon(1e-9));
    CHECK(dgh == doctest::Approx(symmetric_distance(GroupElement::identity(3), g.inverse() * h)).epsilon(1e-9));
    CHECK(symmetric_distance(g, l) <= dgh + symmetric_distance(h, l) + 1e-9);
  }
}

TEST_CASE("compact perturbations move mu by a bounded amount") {
  Fixture f = builtin_fixture("schottky2-tau3");
  std::vector<GroupElement> q{GroupElement::identity(3)};
  double qmax = 0;
  for (int k = 0; k < f.gens.rank(); ++k) {
    q.push_back(f.gens.gen(k));
    q.push_back(f.gens.gen(k).inverse());
    qmax = std::max(qmax, cartan_projection(f.gens.gen(k)).norm());
  }
  Rng rng(43);
  double sup = 0;
  for (int n = 0; n < 200; ++n) {
    Word w;
    int len = 1 + n % 8;
    for (int i = 0; i < len; ++i) w.push_back((rng() % 2 ? 1 : -1) * int(1 + rng() % 2));
    GroupElement g = f.gens.evaluate(w);
    for (const auto& q1 : q)
      for (const auto& q2 : q)
        sup = std::max(sup, (cartan_projection(q1 * g * q2) - cartan_projection(g)).norm());
  }
  // d(q1 g q2 o, g o) <= d(q1 g q2 o, q1 g o) + d(q1 g o, g o) = |mu(q2)| + |mu(q1)|
  // equality is attained when q1, q2 cancel letters of g; cancellation costs digits of the small singular values
  CHECK(sup <= 2 * qmax + 1e-4);
  CHECK(sup > 0);
}

TEST_CASE("theta sets") {
  ThetaSet th = ThetaSet::parse(5, "1,3");
  CHECK(th.indices() == std::vector<int>{1, 3});
  CHECK(th.iota().indices() == std::vector<int>{2, 4});
  CHECK(th.cuts() == std::vector<int>{0, 1, 3, 5});
  CHECK_THROWS_AS(ThetaSet(3, {3}), Error);
  CHECK_THROWS_AS(ThetaSet(3, {}), Error);
}
