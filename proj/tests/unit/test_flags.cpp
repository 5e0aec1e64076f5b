#include <doctest.h>

#include "pslab/fixtures.hpp"
#include "pslab/flags.hpp"
#include "pslab/wedge.hpp"
#include "support.hpp"

using namespace pslab;
using namespace testing_support;

namespace {

Mat diag3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v.array().exp().matrix().asDiagonal();
}

Mat rotation_det1(int d, Rng& rng) {
  Mat k = random_orthogonal(d, rng);
  if (k.determinant() < 0) k.col(0) *= -1;
  return k;
}

ShadowSpec at_origin(const GroupElement& q, double r, const ThetaSet& th) {
  return ShadowSpec(GroupElement::identity(q.dim()), q, r, th);
}

}  // namespace

TEST_CASE("attractor flags") {
  Rng rng(1);
  Mat a = diag3(2, 0, -2);
  for (const ThetaSet& th : {ThetaSet::full(3), ThetaSet(3, {1}), ThetaSet(3, {2})}) {
    CHECK(attractor_flag(GroupElement(a), th).same_as(PartialFlag::standard(th)));
    Mat k = rotation_det1(3, rng);
    CHECK(attractor_flag(GroupElement(Mat(k * a)), th).same_as(PartialFlag(th, k)));
  }
  Mat flat = diag3(1, 1, -2);
  CHECK_THROWS_AS(attractor_flag(GroupElement(flat), ThetaSet(3, {1})), Error);
  CHECK_NOTHROW(attractor_flag(GroupElement(flat), ThetaSet(3, {2})));

  for (int n = 0; n < 20; ++n) {
    GroupElement g = random_sl(4, rng, 2.0);
    Mat k = rotation_det1(4, rng);
    ThetaSet th = ThetaSet::full(4);
    PartialFlag lhs = attractor_flag(GroupElement(Mat(k * g.matrix())), th);
    CHECK(lhs.same_as(attractor_flag(g, th).transformed(k)));
  }
}

TEST_CASE("attractor flags from stored wedges match the SVD") {
  Fixture f = builtin_fixture("pingpong-sl3");
  OrbitBall b = enumerate_ball(f.gens, 4);
  for (std::size_t i = 1; i < b.size(); i += 7) {
    PartialFlag direct = attractor_flag(b.element(i), f.theta);
    CHECK(attractor_flag(b, i, f.theta).same_as(direct, 1e-7));
  }
}

TEST_CASE("general position margin") {
  for (int d : {2, 3, 4}) {
    ThetaSet th = ThetaSet::full(d);
    PartialFlag xi = PartialFlag::standard(th);
    PartialFlag opposite(th.iota(), longest_weyl_element(d));
    CHECK(general_position_margin(xi, opposite) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(general_position_margin(xi, PartialFlag::standard(th.iota())) < 1e-12);
  }
  Rng rng(2);
  ThetaSet th(4, {1, 3});
  for (int n = 0; n < 10; ++n) {
    PartialFlag xi = PartialFlag::random(th, rng), eta = PartialFlag::random(th.iota(), rng);
    double m = general_position_margin(xi, eta);
    CHECK(general_position_margin(xi.recompleted(rng), eta.recompleted(rng)) == doctest::Approx(m).epsilon(1e-10));
    CHECK(general_position_margin(eta, xi) == doctest::Approx(m).epsilon(1e-10));
  }
  ThetaSet one(4, {1});
  CHECK_THROWS_AS(general_position_margin(PartialFlag::standard(one), PartialFlag::standard(one)), Error);
}

TEST_CASE("shadow examples") {
  Rng rng(3);
  ThetaSet th = ThetaSet::full(3);
  // g = k a l exactly
  Mat k = rotation_det1(3, rng), l = rotation_det1(3, rng);
  GroupElement g(Mat(k * diag3(1.5, 0.2, -1.7) * l));
  for (double r : {1e-3, 0.5, 2.0}) {
    ShadowResult res = shadow_contains(attractor_flag(g, th), at_origin(g, r, th));
    CHECK(res.member);
    CHECK(res.d_min < 1e-6);
  }
  ShadowResult self = shadow_contains(PartialFlag::standard(th), at_origin(GroupElement::identity(3), 0.0 + 1e-9, th));
  CHECK(self.member);
  CHECK(self.d_min < 1e-8);

  // the repelling flag sees g o at distance at least T sqrt 2
  for (double T : {0.5, 1.0, 2.0}) {
    GroupElement a(diag3(T, 0, -T));
    PartialFlag rep(th, longest_weyl_element(3));
    ShadowResult res = shadow_contains(rep, at_origin(a, T * std::sqrt(2.0) * 0.99, th));
    CHECK_FALSE(res.member);
    CHECK(res.d_min >= T * std::sqrt(2.0) - 1e-6);
  }
}

TEST_CASE("shadows depend only on the target point") {
  Rng rng(4);
  ThetaSet th = ThetaSet::full(3);
  for (int n = 0; n < 10; ++n) {
    GroupElement q = random_sl(3, rng, 1.5);
    GroupElement qk(Mat(q.matrix() * rotation_det1(3, rng)));
    PartialFlag xi = PartialFlag::random(th, rng);
    ShadowResult a = shadow_contains(xi, at_origin(q, 1.0, th));
    ShadowResult b = shadow_contains(xi, at_origin(qk, 1.0, th));
    CHECK(a.d_min == doctest::Approx(b.d_min).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("shadows from a general viewpoint reduce by left translation") {
  Rng rng(5);
  ThetaSet th = ThetaSet::full(3);
  GroupElement p = random_sl(3, rng), q = random_sl(3, rng, 1.5);
  PartialFlag xi = PartialFlag::random(th, rng);
  ShadowResult a = shadow_contains(xi, ShadowSpec(p, q, 1.0, th));
  ShadowResult b = shadow_contains(xi.transformed(p.inverse().matrix()), at_origin(p.inverse() * q, 1.0, th));
  CHECK(a.d_min == doctest::Approx(b.d_min).epsilon(1e-6).scale(1.0));
}

TEST_CASE("bulk membership agrees with exhaustive exact tests") {
  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(f.gens, 5);
  Rng rng(6);
  std::vector<PartialFlag> flags{attractor_flag(b, b.length_begin(5), f.theta)};
  for (int n = 0; n < 3; ++n) flags.push_back(PartialFlag::random(f.theta, rng));
  ShadowOptions exact;
  exact.screens = false;
  for (double N : {0.5, 2.0}) {
    for (const auto& xi : flags) {
      ConicalProbe bulk = conical_membership_probe(xi, b, N);
      std::vector<std::size_t> brute(b.max_length() + 1, 0);
      std::size_t near = 0;
      for (std::size_t i = 0; i < b.size(); ++i) {
        ShadowResult r = shadow_contains(xi, at_origin(b.element(i), N, f.theta), exact);
        if (r.member) ++brute[b.length(i)];
        if (std::abs(r.d_min - N) < 1e-6) ++near;
      }
      std::size_t diff = 0;
      for (int n = 0; n <= b.max_length(); ++n)
        diff += bulk.per_length[n] > brute[n] ? bulk.per_length[n] - brute[n] : brute[n] - bulk.per_length[n];
      CHECK(diff <= near);
    }
  }
}

TEST_CASE("conical membership probe") {
  GeneratorSet cyc = builtin_fixture("cyclic-diag").gens;
  GeneratorSet powers({cyc.gen(0)});
  OrbitBall b = enumerate_ball(powers, 8);
  PartialFlag axis = attractor_flag(cyc.gen(0), ThetaSet::full(2));
  ConicalProbe p = conical_membership_probe(axis, b, 0.5);
  for (int n = 0; n <= 8; ++n) CHECK(p.per_length[n] >= 1);
  CHECK(p.conical_trend);

  // a flag far from the limit set of the Schottky group sees no top-length shadows
  Fixture f = builtin_fixture("schottky2");
  OrbitBall s = enumerate_ball(f.gens, 8);
  Mat r(2, 2);
  double t = M_PI / 8;  // between the attracting lines at angles 0 and pi/4 ... and their repellers
  r << std::cos(t + M_PI / 2), -std::sin(t + M_PI / 2), std::sin(t + M_PI / 2), std::cos(t + M_PI / 2);
  PartialFlag far(ThetaSet::full(2), r);
  double nearest = 1;
  for (std::size_t i = s.length_begin(8); i < s.length_end(8); ++i)
    nearest = std::min(nearest, far.distance(attractor_flag(s, i, f.theta)));
  REQUIRE(nearest > 0.15);
  ConicalProbe q = conical_membership_probe(far, s, 1.0);
  CHECK_FALSE(q.conical_trend);
  CHECK(q.per_length[8] == 0);

  Rng rng(7);
  PartialFlag xi = PartialFlag::random(f.theta, rng);
  CHECK(conical_membership_probe(xi, s, 2.0).witnesses >= conical_membership_probe(xi, s, 1.0).witnesses);
}

TEST_CASE("shadow multiplicity") {
  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(f.gens, 6);
  MultiplicityOptions o;
  o.atom_samples = 200;
  o.random_flags = 50;
  // only the identity has psi = 0
  MultiplicityReport one = shadow_multiplicity(b, 1.0, f.psi, -0.5, 0.6, o);
  CHECK(one.window_size == 1);
  CHECK(one.max_count <= 1);
  MultiplicityReport empty = shadow_multiplicity(b, 1.0, f.psi, 1000, 1, o);
  CHECK(empty.max_count == 0);
  std::size_t prev = 0;
  for (double D : {0.5, 1.0, 2.0}) {
    MultiplicityReport r = shadow_multiplicity(b, 1.0, f.psi, 4.0, D, o);
    CHECK(r.max_count >= prev);
    prev = r.max_count;
  }
}

TEST_CASE("busemann against cartan") {
  Rng rng(8);
  ThetaSet th = ThetaSet::full(3);
  Mat k = rotation_det1(3, rng), l = rotation_det1(3, rng);
  GroupElement g(Mat(k * diag3(1.2, 0.1, -1.3) * l));
  PartialFlag xi = attractor_flag(g, th);
  CartanVector defect = busemann_theta(xi, GroupElement::identity(3), g) - cartan_projection(g);
  CHECK(defect.norm() < 1e-8);

  Fixture s = builtin_fixture("schottky2");
  OrbitBall b = enumerate_ball(s.gens, 8);
  BusemannCartanOptions o;
  o.elements = 150;
  BusemannCartanReport r1 = busemann_vs_cartan_check(b, s.theta, 1.0, o);
  BusemannCartanReport r2 = busemann_vs_cartan_check(b, s.theta, 2.0, o);
  CHECK(r1.pairs > 0);
  CHECK(r1.kappa <= 2.0 + 0.05);
  CHECK(r2.kappa <= 2.0 + 0.05);
}

TEST_CASE("antipodality of limit flags") {
  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(f.gens, 8);
  double m4 = antipodality_margin(b, f.theta, 4), m8 = antipodality_margin(b, f.theta, 8);
  CHECK(m4 > 0.05);
  CHECK(m8 > 0.05);
  CHECK(m8 >= 0.5 * m4);
}

TEST_CASE("wedges of columns") {
  Rng rng(9);
  Mat f = random_orthogonal(4, rng);
  for (int j = 1; j < 4; ++j) {
    Vec w = wedge_of_columns(f, j);
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Vec raw(w.size());
    wedge_of_columns(f.data(), 4, j, raw.data());
    CHECK(max_abs(raw - w) < 1e-14);
    Mat span = subspace_of_wedge(w, 4, j);
    Mat proj_a = span * span.transpose(), proj_b = f.leftCols(j) * f.leftCols(j).transpose();
    CHECK((proj_a - proj_b).norm() < 1e-10);
  }
}
