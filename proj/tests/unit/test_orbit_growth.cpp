#include <doctest.h>

#include "pslab/fixtures.hpp"
#include "pslab/growth.hpp"
#include "support.hpp"

using namespace pslab;
using namespace testing_support;

namespace {

GeneratorSet cyclic() { return builtin_fixture("cyclic-diag").gens; }

Mat block4(const Mat& x, const Mat& y) {
  Mat m = Mat::Zero(4, 4);
  m.topLeftCorner(2, 2) = x;
  m.bottomRightCorner(2, 2) = y;
  return m;
}

// unit vector of a_theta for d = 3, full theta, at angle t from (1, 0, -1)/sqrt2 towards (1, -2, 1)/sqrt6
Vec plane_direction(double t) {
  Vec a(3), b(3);
  a << 1, 0, -1;
  b << 1, -2, 1;
  return std::cos(t) * a / std::sqrt(2.0) + std::sin(t) * b / std::sqrt(6.0);
}

}  // namespace

TEST_CASE("enumeration counts") {
  OrbitBall b = enumerate_ball(schottky2_generators(), 3);
  CHECK(b.size() == 53);
  CHECK(b.length_end(1) - b.length_begin(1) == 4);
  CHECK(b.length_end(3) - b.length_begin(3) == 36);
  OrbitBall e = enumerate_ball(schottky2_generators(), 0);
  CHECK(e.size() == 1);
  CHECK(max_abs(e.mu_vector(0).entries()) == 0);

  OrbitBall c = enumerate_ball(cyclic(), 5);
  REQUIRE(c.size() == 11);
  std::vector<int> tops;
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c.mu(i)[0] == doctest::Approx(c.length(i)).epsilon(1e-12));
    CHECK(c.mu(i)[1] == doctest::Approx(-c.length(i)).epsilon(1e-12));
  }
}

TEST_CASE("enumeration order and determinism") {
  GeneratorSet g = builtin_fixture("pingpong-sl3").gens;
  OrbitBall a = enumerate_ball(g, 5), b = enumerate_ball(g, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.word(i) == b.word(i));
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.length(i - 1) <= a.length(i));
  // every stored matrix matches the product of its word
  for (std::size_t i = 0; i < a.size(); i += 37) {
    Mat direct = g.evaluate(a.word(i)).matrix();
    CHECK((direct - Mat(a.matrix(i))).norm() < 1e-9 * direct.norm());
  }
}

TEST_CASE("mu is subadditive along words") {
  for (const char* name : {"schottky2", "schottky2-tau3", "pingpong-sl3"}) {
    Fixture f = builtin_fixture(name);
    double top = 0;
    for (int k = 0; k < f.gens.rank(); ++k) top = std::max(top, cartan_projection(f.gens.gen(k)).norm());
    OrbitBall b = enumerate_ball(f.gens, 6);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.mu_vector(i).norm() <= b.length(i) * top + 1e-9);
  }
}

TEST_CASE("regularity report") {
  Fixture t3 = builtin_fixture("schottky2-tau3");
  RegularityReport r = regularity_report(enumerate_ball(t3.gens, 8), t3.theta);
  CHECK(r.slope > 0);
  CHECK_FALSE(r.non_regular);

  // one factor trivial: alpha_2 of (g, e) vanishes for every element
  GeneratorSet s = schottky2_generators();
  Mat id = Mat::Identity(2, 2);
  GeneratorSet degenerate({GroupElement(block4(s.gen(0).matrix(), id)), GroupElement(block4(s.gen(1).matrix(), id))});
  RegularityReport q = regularity_report(enumerate_ball(degenerate, 6), ThetaSet::single(4, 2));
  CHECK(q.non_regular);
  for (double m : q.minima) CHECK(m < 1e-9);

  CHECK(regularity_report(enumerate_ball(s, 0), ThetaSet::full(2)).lengths.empty());
  CHECK_THROWS_AS(regularity_report(enumerate_ball(s, 2), ThetaSet::full(2)), Error);
}

TEST_CASE("poincare partial sums") {
  LinearForm two_t(ThetaSet::full(2), Vec::Ones(1));  // psi(t, -t) = 2t on w_1 = (1/2, -1/2)
  OrbitBall id = enumerate_ball(cyclic(), 0);
  CHECK(poincare_partial_sum(id, two_t, 3.7) == 1.0);

  OrbitBall c = enumerate_ball(cyclic(), 5);
  double expect = 1;
  for (int n = 1; n <= 5; ++n) expect += 2 * std::exp(-2.0 * n);
  CHECK(poincare_partial_sum(c, two_t, 1.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(poincare_partial_sum(c, two_t, 0.0) == doctest::Approx(11.0));

  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b6 = enumerate_ball(f.gens, 6), b7 = enumerate_ball(f.gens, 7);
  double prev = INFINITY;
  for (double s = 0; s < 2; s += 0.1) {
    double p = poincare_partial_sum(b6, f.psi, s);
    CHECK(p <= prev);
    CHECK(p <= poincare_partial_sum(b7, f.psi, s));
    prev = p;
  }
}

TEST_CASE("exponent of a cyclic group is zero") {
  LinearForm two_t(ThetaSet::full(2), Vec::Ones(1));
  ExponentEstimate e = critical_exponent(enumerate_ball(cyclic(), 12), two_t);
  CHECK(e.polynomial);
  CHECK(e.value == 0);
}

TEST_CASE("tau3 image and the SL2 group give the same exponent") {
  GeneratorSet s = schottky2_generators();
  Fixture t3 = builtin_fixture("schottky2-tau3");
  OrbitBall b2 = enumerate_ball(s, 9), b3 = enumerate_ball(t3.gens, 9);
  // oracle: mu of the symmetric square is mu_1 (2, 0, -2)
  for (std::size_t i = 0; i < b3.size(); i += 101) {
    Eigen::JacobiSVD<Mat> svd(Mat(b3.matrix(i)));
    CHECK(std::log(svd.singularValues()[0]) == doctest::Approx(2 * b2.mu(i)[0]).epsilon(1e-9));
  }
  LinearForm psi0(ThetaSet::full(2), Vec::Ones(1));
  ExponentEstimate a = critical_exponent(b2, psi0), b = critical_exponent(b3, t3.psi);
  CHECK(std::abs(a.value - b.value) < 1e-10);
  CHECK(a.ci_low <= a.value);
  CHECK(a.value <= a.ci_high);
}

TEST_CASE("bisection cross-check, scaling and relabeling") {
  Fixture f = builtin_fixture("schottky2");
  OrbitBall b = enumerate_ball(f.gens, 10);
  ExponentEstimate e = critical_exponent(b, f.psi);
  double bis = critical_exponent_bisection(b, f.psi);
  CHECK(bis >= e.ci_low - 0.01);
  CHECK(bis <= e.ci_high + 0.01);

  ExponentEstimate e2 = critical_exponent(b, f.psi.scaled(2.0));
  CHECK(e2.value == doctest::Approx(e.value / 2).epsilon(1e-9));

  GeneratorSet swapped({f.gens.gen(1), f.gens.gen(0)}, {"b", "a"});
  ExponentEstimate e3 = critical_exponent(enumerate_ball(swapped, 10), f.psi);
  CHECK(e3.value >= e.ci_low);
  CHECK(e3.value <= e.ci_high);
}

TEST_CASE("properness screen") {
  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(f.gens, 4);
  LinearForm bad = LinearForm::from_dual(ThetaSet::full(3), Vec(Vec::Unit(3, 1) - Vec::Unit(3, 0)));
  CHECK_THROWS_AS(critical_exponent(b, bad), PropernessViolation);
}

TEST_CASE("directional exponents on the tau3 image") {
  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(f.gens, 9);
  Vec ray(3), off(3);
  ray << 2, 0, -2;
  off << 1, 1, -2;
  auto on = directional_tau(b, ConeSpec(f.theta, ray.normalized()));
  ExponentEstimate full = norm_exponent(b, f.theta);
  for (const auto& a : on) {
    CHECK(a.count > 0);
    CHECK(a.estimate.value >= full.ci_low);
    CHECK(a.estimate.value <= full.ci_high);
  }
  auto away = directional_tau(b, ConeSpec(f.theta, off.normalized()));
  for (const auto& a : away) {
    CHECK(a.count == 0);
    CHECK(a.estimate.value == kMinusInfinity);
  }
}

TEST_CASE("growth indicator") {
  Fixture f = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(f.gens, 9);
  Vec ray(3);
  ray << 2, 0, -2;
  std::vector<Vec> dirs{Vec::Zero(3), ray.normalized(), ray, plane_direction(0.6)};
  IndicatorGrid g = growth_indicator(b, f.theta, dirs);
  CHECK(g.values[0] == 0);
  CHECK(g.values[2] == doctest::Approx(ray.norm() * g.values[1]).epsilon(1e-12));
  CHECK(g.values[3] == kMinusInfinity);
  ExponentEstimate full = norm_exponent(b, f.theta);
  CHECK(g.values[1] <= full.ci_high + 1e-9);

  TangencyReport t = tangency_check(b, f.psi, g);
  CHECK(t.pass);
  REQUIRE(t.contact_index >= 0);
  CHECK((g.directions[t.contact_index].normalized() - ray.normalized()).norm() < 1e-9);
  CHECK(std::isinf(t.margin[3]));

  // with the form rescaled by its exponent the tangency inequality holds with delta = 1
  ExponentEstimate one = t.delta;
  one.value = 1;
  one.ci_low = one.ci_high = 1;
  CHECK(tangency_check(one, f.psi.scaled(t.delta.value), g).pass);
}

TEST_CASE("limit cones") {
  Fixture t3 = builtin_fixture("schottky2-tau3");
  OrbitBall b = enumerate_ball(t3.gens, 8);
  LimitConeEstimate c = limit_cone(b, t3.theta, 4.0);
  REQUIRE(c.extreme_rays.size() == 1);
  Vec ray(3);
  ray << 2, 0, -2;
  CHECK((c.extreme_rays[0].normalized() - ray.normalized()).norm() < 1e-9);
  CHECK(cone_directions(c, 5).size() == 1);

  Fixture p = builtin_fixture("pingpong-sl3");
  LimitConeEstimate q = limit_cone(enumerate_ball(p.gens, 6), p.theta, 10.0);
  CHECK(q.dimension == 2);
  CHECK(q.angular_width > 0.05);
  auto dirs = cone_directions(q, 7);
  CHECK(dirs.size() == 7);
  for (const auto& u : dirs) CHECK(u.norm() == doctest::Approx(1.0));

  CHECK_THROWS_AS(limit_cone(enumerate_ball(p.gens, 0), p.theta, 0.0), Error);
}

TEST_CASE("concavity check on synthetic grids") {
  IndicatorGrid g;
  g.theta = ThetaSet::full(3);
  std::vector<double> angles{0.0, 0.2, 0.4};
  Vec f(3);
  f << 0.3, 0.1, -0.4;
  for (double t : angles) {
    g.directions.push_back(plane_direction(t));
    g.values.push_back(f.dot(plane_direction(t)));
  }
  g.ci_low = g.ci_high = g.values;
  ConcavityReport r = concavity_check(g);
  CHECK(r.triples == 1);
  CHECK(r.pass);

  g.values = {1.0, 0.0, 1.0};
  ConcavityReport bad = concavity_check(g);
  CHECK_FALSE(bad.pass);
  CHECK(bad.violations.size() == 1);

  IndicatorGrid single;
  single.theta = ThetaSet::full(3);
  single.directions = {plane_direction(0)};
  single.values = {0.7};
  CHECK(concavity_check(single).pass);
}
