#include "pslab/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pslab/typea.hpp"

namespace pslab {

namespace {

Mat rotation2(double angle) {
  Mat r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Mat rotation3(double a, double b, double c) {
  Mat rz(3, 3), ry(3, 3), rx(3, 3);
  rz << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  ry << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
  rx << 1, 0, 0, 0, std::cos(c), -std::sin(c), 0, std::sin(c), std::cos(c);
  return rz * ry * rx;
}

Mat diag(std::initializer_list<double> logs) {
  Vec v(logs.size());
  int k = 0;
  for (double x : logs) v[k++] = std::exp(x);
  return v.asDiagonal();
}

double line_angle(double x, double y) {
  double a = std::atan2(y, x);
  if (a < 0) a += M_PI;
  if (a >= M_PI) a -= M_PI;
  return a;
}

double rp1_distance(double a, double b) {
  double t = std::fmod(std::abs(a - b), M_PI);
  return std::min(t, M_PI - t);
}

}  // namespace

GeneratorSet schottky2_generators(double ell) {
  Mat a = diag({ell, -ell});
  Mat r = rotation2(M_PI / 4);
  Mat b = r * a * r.transpose();
  return GeneratorSet({GroupElement(a), GroupElement(b)}, {"a", "b"});
}

std::vector<std::string> builtin_fixture_names() {
  return {"schottky2", "schottky2-tau3", "schottky2-tau4", "pingpong-sl3", "selfjoin-sl2xsl2", "cyclic-diag"};
}

Fixture builtin_fixture(const std::string& name) {
  Fixture f;
  f.name = name;
  if (name == "schottky2") {
    f.gens = schottky2_generators();
    f.theta = ThetaSet::full(2);
    f.psi = LinearForm(f.theta, Vec::Ones(1));
    f.note = "a = diag(e^l, e^-l), b = a conjugated by the 45 degree rotation, l = 1";
  } else if (name == "schottky2-tau3" || name == "schottky2-tau4") {
    int d = name == "schottky2-tau3" ? 3 : 4;
    GeneratorSet s = schottky2_generators();
    f.gens = GeneratorSet({irreducible_rep(s.gen(0), d), irreducible_rep(s.gen(1), d)}, {"a", "b"});
    f.theta = ThetaSet::full(d);
    f.psi = LinearForm::from_dual(f.theta, Vec(Vec::Unit(d, 0) - Vec::Unit(d, 1)));
    f.note = "irreducible image of schottky2";
  } else if (name == "pingpong-sl3") {
    Mat a = diag({3.0, -3.0, 0.0});
    Mat k = rotation3(0.7, 1.1, 0.4);
    Mat b = k * diag({3.75, 0.45, -4.2}) * k.transpose();
    f.gens = GeneratorSet({GroupElement(a), GroupElement(b)}, {"a", "b"});
    f.theta = ThetaSet::full(3);
    f.psi = LinearForm::from_dual(f.theta, Vec(Vec::Unit(3, 0) - Vec::Unit(3, 1)));
    f.note = "diag(e^3, e^-3, 1) and a generic conjugate of diag(e^3.75, e^0.45, e^-4.2)";
  } else if (name == "selfjoin-sl2xsl2") {
    GeneratorSet s1 = schottky2_generators(1.0);
    Mat a2 = diag({1.6, -1.6});
    Mat r = rotation2(M_PI / 3);
    Mat b2 = r * a2 * r.transpose();
    auto block = [](const Mat& x, const Mat& y) {
      Mat m = Mat::Zero(4, 4);
      m.topLeftCorner(2, 2) = x;
      m.bottomRightCorner(2, 2) = y;
      return m;
    };
    f.gens = GeneratorSet({GroupElement(block(s1.gen(0).matrix(), a2)), GroupElement(block(s1.gen(1).matrix(), b2))},
                          {"a", "b"});
    f.theta = ThetaSet::single(4, 2);
    f.psi = LinearForm::simple_root(4, 2);
    f.note = "block diagonal joint representation of two Schottky groups";
  } else if (name == "cyclic-diag") {
    f.gens = GeneratorSet({GroupElement(diag({1.0, -1.0}))}, {"a"});
    f.theta = ThetaSet::full(2);
    f.psi = LinearForm(f.theta, Vec::Ones(1));
    f.note = "diag(e, e^-1)";
  } else {
    throw Error(ErrorKind::io, "unknown builtin fixture '" + name + "'");
  }
  return f;
}

Fixture parse_fixture_text(const std::string& text, const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::io, std::string("fixture parse error: ") + e.what());
  }
  Fixture f;
  f.name = j.value("name", name);
  if (!j.contains("d") || !j.contains("generators")) throw Error(ErrorKind::io, "fixture needs 'd' and 'generators'");
  int d = j["d"].get<int>();
  std::vector<GroupElement> gens;
  for (const auto& g : j["generators"]) {
    Mat m(d, d);
    if (g.is_array() && !g.empty() && g[0].is_array()) {
      if (static_cast<int>(g.size()) != d) throw Error(ErrorKind::io, "generator has wrong number of rows");
      for (int r = 0; r < d; ++r) {
        if (static_cast<int>(g[r].size()) != d) throw Error(ErrorKind::io, "generator row has wrong length");
        for (int c = 0; c < d; ++c) m(r, c) = g[r][c].get<double>();
      }
    } else {
      if (static_cast<int>(g.size()) != d * d) throw Error(ErrorKind::io, "flat generator needs d*d entries");
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = g[r * d + c].get<double>();
    }
    gens.emplace_back(m);
  }
  std::vector<std::string> labels = j.value("labels", std::vector<std::string>{});
  f.gens = GeneratorSet(gens, labels);
  std::vector<int> th = j.value("theta", std::vector<int>{});
  f.theta = th.empty() ? ThetaSet::full(d) : ThetaSet(d, th);
  std::vector<double> psi = j.value("psi", std::vector<double>{});
  if (psi.empty()) psi.assign(f.theta.size(), 1.0);
  f.psi = LinearForm(f.theta, Eigen::Map<Vec>(psi.data(), psi.size()));
  f.note = j.value("note", std::string());
  return f;
}

Fixture load_fixture(const std::string& name_or_path) {
  for (const auto& n : builtin_fixture_names())
    if (n == name_or_path) return builtin_fixture(n);
  std::ifstream in(name_or_path);
  if (!in) throw Error(ErrorKind::io, "fixture '" + name_or_path + "' is neither builtin nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixture_text(ss.str(), name_or_path);
}

PingPongCertificate verify_pingpong_sl2(const GeneratorSet& gens, double half_width) {
  PingPongCertificate cert;
  if (gens.d() != 2) throw Error(ErrorKind::precondition, "ping-pong check is for SL_2");
  struct Arc { double attract, repel; };
  std::vector<Arc> arcs;
  std::vector<int> letters = gens.letters();
  for (int x : letters) {
    Eigen::EigenSolver<Mat> es(gens.letter_matrix(x));
    auto ev = es.eigenvalues();
    int top = std::abs(ev[0].real()) > std::abs(ev[1].real()) ? 0 : 1;
    Vec va = es.eigenvectors().col(top).real(), vr = es.eigenvectors().col(1 - top).real();
    arcs.push_back({line_angle(va[0], va[1]), line_angle(vr[0], vr[1])});
  }
  // disjointness of the attracting arcs (each letter's repelling arc is the inverse's attracting arc)
  double worst = INFINITY;
  for (std::size_t p = 0; p < arcs.size(); ++p)
    for (std::size_t q = p + 1; q < arcs.size(); ++q)
      worst = std::min(worst, rp1_distance(arcs[p].attract, arcs[q].attract) - 2 * half_width);
  const int samples = 4000;
  for (std::size_t p = 0; p < arcs.size(); ++p) {
    const Mat& m = gens.letter_matrix(letters[p]);
    for (int s = 0; s <= samples; ++s) {
      double ang = arcs[p].repel + half_width + (M_PI - 2 * half_width) * s / samples;
      Vec v(2);
      v << std::cos(ang), std::sin(ang);
      Vec w = m * v;
      double img = line_angle(w[0], w[1]);
      worst = std::min(worst, half_width - rp1_distance(img, arcs[p].attract));
    }
  }
  cert.worst_margin = worst;
  cert.ok = worst > 0;
  return cert;
}

}  // namespace pslab
