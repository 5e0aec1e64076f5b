#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "pslab/growth.hpp"
#include "pslab/wedge.hpp"
#include "shadow_engine.hpp"

namespace pslab {

namespace detail {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

constexpr int kIndexDim = 10;  // projectors of subspaces of R^4
using IndexPoint = bg::model::point<double, kIndexDim, bg::cs::cartesian>;
using IndexBox = bg::model::box<IndexPoint>;
using IndexValue = std::pair<IndexPoint, std::uint32_t>;

namespace {

// Upper triangle of V V^T, off-diagonal entries scaled so that Euclidean distance
// equals the Frobenius distance of projectors.
void embed(const Eigen::Ref<const Mat>& frame, int dim, double* out) {
  const int d = static_cast<int>(frame.rows());
  Mat v = frame.leftCols(dim);
  Mat p = v * v.transpose();
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) out[k++] = (i == j ? 1.0 : std::sqrt(2.0)) * p(i, j);
}

IndexPoint to_point(const double* x, int n) {
  IndexPoint p;
  double buf[kIndexDim] = {0};
  std::copy(x, x + n, buf);
  bg::set<0>(p, buf[0]);
  bg::set<1>(p, buf[1]);
  bg::set<2>(p, buf[2]);
  bg::set<3>(p, buf[3]);
  bg::set<4>(p, buf[4]);
  bg::set<5>(p, buf[5]);
  bg::set<6>(p, buf[6]);
  bg::set<7>(p, buf[7]);
  bg::set<8>(p, buf[8]);
  bg::set<9>(p, buf[9]);
  return p;
}

}  // namespace

struct SubspaceIndex::Impl {
  bool brute = false;
  bgi::rtree<IndexValue, bgi::rstar<16>> tree;
};

SubspaceIndex::SubspaceIndex(int d, int dim) : d_(d), dim_(dim), impl_(std::make_unique<Impl>()) {
  impl_->brute = d * (d + 1) / 2 > kIndexDim;
}
SubspaceIndex::~SubspaceIndex() = default;
SubspaceIndex::SubspaceIndex(SubspaceIndex&&) noexcept = default;

void SubspaceIndex::build(const std::vector<const double*>& frames) {
  frames_ = frames;
  if (impl_->brute) return;
  const int n = d_ * (d_ + 1) / 2;
  std::vector<IndexValue> vals;
  vals.reserve(frames.size());
  double buf[kIndexDim];
  for (std::size_t k = 0; k < frames.size(); ++k) {
    embed(Eigen::Map<const Mat>(frames[k], d_, d_), dim_, buf);
    vals.emplace_back(to_point(buf, n), static_cast<std::uint32_t>(k));
  }
  impl_->tree = bgi::rtree<IndexValue, bgi::rstar<16>>(vals.begin(), vals.end());
}

double SubspaceIndex::distance(const Mat& a, const double* b) const {
  const double* pa = a.data();
  double acc = 0;
  for (int i = 0; i < d_; ++i)
    for (int j = i; j < d_; ++j) {
      double x = 0;
      for (int c = 0; c < dim_; ++c) x += pa[c * d_ + i] * pa[c * d_ + j] - b[c * d_ + i] * b[c * d_ + j];
      acc += (i == j ? 1.0 : 2.0) * x * x;
    }
  return std::sqrt(acc);
}

std::vector<std::uint32_t> SubspaceIndex::query(const Mat& frame, double radius) const {
  std::vector<std::uint32_t> out;
  if (impl_->brute) {
    for (std::size_t k = 0; k < frames_.size(); ++k)
      if (distance(frame, frames_[k]) <= radius) out.push_back(static_cast<std::uint32_t>(k));
    return out;
  }
  const int n = d_ * (d_ + 1) / 2;
  double c[kIndexDim] = {0}, lo[kIndexDim] = {0}, hi[kIndexDim] = {0};
  embed(frame, dim_, c);
  for (int i = 0; i < n; ++i) {
    lo[i] = c[i] - radius;
    hi[i] = c[i] + radius;
  }
  IndexBox box(to_point(lo, n), to_point(hi, n));
  std::vector<IndexValue> hits;
  impl_->tree.query(bgi::intersects(box), std::back_inserter(hits));
  for (const auto& h : hits) {
    if (distance(frame, frames_[h.second]) <= radius) out.push_back(h.second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double max_projector_distance(int d, int dim) { return std::sqrt(2.0 * std::min(dim, d - dim)); }

double candidate_radius(const double* mu, const ThetaSet& theta, double r) {
  int c = theta.indices().front();
  double a = mu[c - 1] - mu[c];
  // floored well above the rounding level of stored frames
  return std::min(max_projector_distance(theta.d(), c), std::max(1e-10, 4.0 * std::exp(1.5 * r - a)));
}

// ---- engine

ShadowEngine::ShadowEngine(const OrbitBall& ball, ThetaSet theta, ShadowOptions opts, Mat base_frame)
    : ball_(ball), theta_(std::move(theta)), opts_(opts), base_(std::move(base_frame)) {
  if (theta_.d() != ball.d()) throw Error(ErrorKind::signature, "shadow engine: theta and ball differ in d");
  const GeneratorSet& g = ball.generators();
  for (int k = 1; k <= g.rank(); ++k) {
    qgens_.push_back(to_quad(g.letter_matrix(k)));
    qinv_.push_back(to_quad(g.letter_matrix(-k)));
  }
}

const QMat& ShadowEngine::quad_element(std::size_t i) {
  auto it = qcache_.find(i);
  if (it != qcache_.end()) return it->second;
  if (qcache_.size() > 200000) qcache_.clear();
  return qcache_.emplace(i, quad_word_product(qgens_, qinv_, ball_.word(i))).first->second;
}

QMat ShadowEngine::quad_frame(const FlagRef& f) {
  const int d = ball_.d();
  if (f.source == FlagSource::exact) return to_quad(Eigen::Map<const Mat>(f.frame, d, d));
  std::size_t key = f.index * 2 + (f.source == FlagSource::base_orbit ? 1 : 0);
  auto it = qframes_.find(key);
  if (it != qframes_.end()) return it->second;
  if (qframes_.size() > 200000) qframes_.clear();
  QMat frame;
  if (f.source == FlagSource::attractor) {
    QMat u;
    quad_singular_values(quad_element(f.index), &u);
    if (u.determinant() < 0) u.col(u.cols() - 1) *= -1;
    frame = u;
  } else {
    if (base_.size() == 0) throw Error(ErrorKind::precondition, "base-orbit flag without a base frame");
    frame = quad_qr_frame(quad_element(f.index) * to_quad(base_));
  }
  return qframes_.emplace(key, frame).first->second;
}

bool ShadowEngine::screen_reject(std::size_t gamma, const double* frame, double r,
                                 double* bound) const {
  const double* mu = ball_.mu(gamma);
  const int d = ball_.d();
  double omega[256];
  double partial = 0;
  int done = 0;
  for (int c : theta_.indices()) {
    while (done < c) partial += mu[done++];
    const int n = binomial(d, c);
    wedge_of_columns(frame, d, c, omega);
    auto w = ball_.wedge(gamma, c);
    double val = 0;
    for (int b = 0; b < n; ++b) {
      double acc = 0;
      for (int a = 0; a < n; ++a) acc += w(a, b) * omega[a];
      val += acc * acc;
    }
    val = std::sqrt(val);
    double D = val > 0 ? partial - std::log(val) : INFINITY;
    double lim = 2.0 * std::sqrt(double(c)) * r;
    if (D > lim * (1 + 1e-12) + 1e-12) {
      if (bound) *bound = D / (2.0 * std::sqrt(double(c)));
      return true;
    }
  }
  return false;
}

Mat ShadowEngine::aligned_block_rotation(const Mat& frame, const Mat& gamma) const {
  const int d = theta_.d();
  Mat rot = Mat::Zero(d, d);
  auto c = theta_.cuts();
  for (std::size_t b = 1; b < c.size(); ++b) {
    int n = c[b] - c[b - 1];
    if (n == 1) {
      rot(c[b - 1], c[b - 1]) = 1;
      continue;
    }
    Mat y = frame.middleCols(c[b - 1], n).transpose() * gamma;
    Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU);
    rot.block(c[b - 1], c[b - 1], n, n) = svd.matrixU();
  }
  return rot;
}

ShadowResult ShadowEngine::test(std::size_t gamma, const FlagRef& f, double r, bool bulk) {
  ShadowResult res;
  res.completion_exact = theta_.is_full();
  const int d = ball_.d();
  Eigen::Map<const Mat> k0(f.frame, d, d);
  double bound = 0;
  if (bulk && opts_.screens && screen_reject(gamma, f.frame, r, &bound)) {
    res.member = false;
    res.d_min = bound;
    res.stage = ShadowStage::screen_reject;
    return res;
  }
  Vec mu = Eigen::Map<const Vec>(ball_.mu(gamma), d);
  Mat h0;
  if (!needs_quad(gamma)) {
    Mat g = ball_.matrix(gamma);
    Mat k = theta_.is_full() ? Mat(k0) : Mat(k0 * aligned_block_rotation(k0, g));
    h0 = (-mu).array().exp().matrix().asDiagonal() * (k.transpose() * g);
  } else {
    QMat kq = quad_frame(f);
    if (!theta_.is_full()) kq = kq * to_quad(aligned_block_rotation(to_double(kq), ball_.matrix(gamma)));
    QMat b = kq.transpose() * quad_element(gamma);
    for (int i = 0; i < d; ++i) b.row(i) *= quad(std::exp(-mu[i]));
    h0 = to_double(b);
    ++quad_count_;
  }
  if (bulk && opts_.screens) {
    double f0 = log_singular_norm(h0);
    if (f0 <= r) {
      res.member = true;
      res.d_min = f0;
      res.stage = ShadowStage::quick_accept;
      return res;
    }
    if (f0 > 2 * r) {
      res.member = false;
      res.d_min = 0.5 * f0;
      res.stage = ShadowStage::quick_reject;
      return res;
    }
  }
  try {
    FlatDistance fd = flat_distance_until(h0, mu, opts_, r, bulk ? r : -1.0);
    res.d_min = fd.value;
    if (fd.lower_bound) {
      res.member = false;
      res.stage = ShadowStage::quick_reject;
      return res;
    }
  } catch (const NumericError& e) {
    if (!bulk) throw;
    res.d_min = e.best_value;
  }
  res.member = res.d_min <= r;
  res.stage = ShadowStage::optimized;
  return res;
}

}  // namespace detail

// ---- public entry points

ShadowResult shadow_contains(const PartialFlag& xi, const ShadowSpec& spec, const ShadowOptions& opts) {
  const ThetaSet& th = spec.theta;
  if (xi.theta() != th) throw Error(ErrorKind::signature, "shadow_contains: flag type differs from the shadow's theta");
  if (!(spec.radius > 0)) throw Error(ErrorKind::precondition, "shadow radius must be positive");
  // left translate so that the viewpoint becomes the base point
  Mat pinv = spec.viewpoint.matrix().inverse();
  Mat q = pinv * spec.target.matrix();
  Mat k = xi.transformed(pinv).frame();
  if (!th.is_full()) {
    auto c = th.cuts();
    for (std::size_t b = 1; b < c.size(); ++b) {
      int n = c[b] - c[b - 1];
      if (n == 1) continue;
      Mat y = k.middleCols(c[b - 1], n).transpose() * q;
      Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU);
      k.middleCols(c[b - 1], n) = k.middleCols(c[b - 1], n) * svd.matrixU();
    }
  }
  CartanVector mu = cartan_projection(q);
  Mat h0 = (-mu.entries()).array().exp().matrix().asDiagonal() * (k.transpose() * q);
  FlatDistance fd = flat_distance(h0, mu.entries(), opts, spec.radius);
  ShadowResult res;
  res.d_min = fd.value;
  res.member = fd.value <= spec.radius;
  res.stage = ShadowStage::optimized;
  res.completion_exact = th.is_full();
  return res;
}

Mat detail::element_frame(const OrbitBall& ball, std::size_t i, const ThetaSet& theta) {
  if (has_attractor(ball, i, theta)) return attractor_flag(ball, i, theta).frame();
  return Mat::Identity(ball.d(), ball.d());
}

MultiplicityReport shadow_multiplicity(const OrbitBall& ball, double R, const LinearForm& phi, double T, double D,
                                       const MultiplicityOptions& opts) {
  if (!(R > 0)) throw Error(ErrorKind::precondition, "multiplicity radius must be positive");
  if (!(D >= 0)) throw Error(ErrorKind::precondition, "window length must be non-negative");
  const ThetaSet& th = phi.theta();
  if (th.d() != ball.d()) throw Error(ErrorKind::signature, "form and ball differ in d");
  MultiplicityReport rep;

  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    double v = phi.eval(ball.mu(i));
    if (v >= T && v <= T + D) window.push_back(i);
  }
  rep.window_size = window.size();

  std::vector<PartialFlag> flags = opts.flags;
  std::vector<detail::FlagRef> refs;
  std::vector<detail::FlagSource> sources;
  std::vector<std::size_t> source_index;
  if (flags.empty()) {
    double s = opts.s;
    if (s <= 0) s = critical_exponent(ball, phi).value + 0.05;
    std::vector<double> logw;
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i < ball.size(); ++i) {
      if (!has_attractor(ball, i, th)) continue;
      logw.push_back(-s * phi.eval(ball.mu(i)));
      idx.push_back(i);
    }
    if (!idx.empty()) {
      double m = *std::max_element(logw.begin(), logw.end());
      std::vector<double> w(logw.size());
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::exp(logw[k] - m);
      Rng rng(opts.seed);
      std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
      std::vector<std::size_t> chosen;
      for (std::size_t k = 0; k < opts.atom_samples; ++k) chosen.push_back(idx[pick(rng)]);
      std::sort(chosen.begin(), chosen.end());
      chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
      for (std::size_t i : chosen) {
        flags.push_back(attractor_flag(ball, i, th));
        sources.push_back(detail::FlagSource::attractor);
        source_index.push_back(i);
      }
    }
    Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k = 0; k < opts.random_flags; ++k) {
      flags.push_back(PartialFlag::random(th, rng));
      sources.push_back(detail::FlagSource::exact);
      source_index.push_back(0);
    }
  } else {
    for (const auto& f : flags)
      if (f.theta() != th) throw Error(ErrorKind::signature, "multiplicity flags must have the form's theta");
    sources.assign(flags.size(), detail::FlagSource::exact);
    source_index.assign(flags.size(), 0);
  }
  rep.flags_tested = flags.size();
  if (window.empty() || flags.empty()) return rep;

  for (std::size_t k = 0; k < flags.size(); ++k) refs.push_back({flags[k].frame().data(), sources[k], source_index[k]});
  std::vector<const double*> frames;
  for (const auto& f : flags) frames.push_back(f.frame().data());
  detail::SubspaceIndex index(ball.d(), th.indices().front());
  index.build(frames);
  detail::ShadowEngine eng(ball, th, opts.shadow);

  std::vector<std::vector<std::size_t>> members(flags.size());
  for (std::size_t g : window) {
    Mat gf = detail::element_frame(ball, g, th);
    detail::for_each_member(
        eng, index, refs, g, gf, R, [](std::uint32_t) { return false; },
        [&](std::uint32_t k, const ShadowResult&) { members[k].push_back(g); });
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < flags.size(); ++k)
    if (members[k].size() > members[best].size()) best = k;
  rep.max_count = members[best].size();
  rep.witness = flags[best];
  for (std::size_t g : members[best]) rep.witness_words.push_back(ball.word_string(g));
  return rep;
}

ConicalProbe conical_membership_probe(const PartialFlag& xi, const OrbitBall& ball, double N,
                                      const ShadowOptions& opts) {
  if (!(N > 0)) throw Error(ErrorKind::precondition, "conical probe radius must be positive");
  if (xi.d() != ball.d()) throw Error(ErrorKind::signature, "flag and ball differ in d");
  ConicalProbe p;
  const int L = ball.max_length();
  p.per_length.assign(L + 1, 0);
  detail::ShadowEngine eng(ball, xi.theta(), opts);
  detail::FlagRef ref{xi.frame().data(), detail::FlagSource::exact, 0};
  for (std::size_t g = 0; g < ball.size(); ++g) {
    if (eng.test(g, ref, N).member) {
      ++p.per_length[ball.length(g)];
      ++p.witnesses;
    }
  }
  p.conical_trend = L >= 1;
  for (int n = 0; n <= L; ++n)
    if (3 * n > 2 * L && p.per_length[n] == 0) p.conical_trend = false;
  return p;
}

BusemannCartanReport busemann_vs_cartan_check(const OrbitBall& ball, const ThetaSet& theta, double R,
                                              const BusemannCartanOptions& opts) {
  if (!(R > 0)) throw Error(ErrorKind::precondition, "radius must be positive");
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "theta and ball differ in d");
  const int d = ball.d();
  const int L = opts.max_length > 0 ? std::min(opts.max_length, ball.max_length()) : ball.max_length();
  detail::ShadowEngine eng(ball, theta, ShadowOptions{});
  const GeneratorSet& gens = ball.generators();
  std::vector<QMat> qg, qi;
  for (int k = 1; k <= gens.rank(); ++k) {
    qg.push_back(to_quad(gens.letter_matrix(k)));
    qi.push_back(to_quad(gens.letter_matrix(-k)));
  }
  BusemannCartanReport rep;
  Rng rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int n = std::max(1, opts.min_length); n <= L; ++n) {
    std::size_t b = ball.length_begin(n), e = ball.length_end(n);
    if (b >= e) continue;
    std::size_t count = std::min<std::size_t>(opts.elements, e - b);
    double worst = 0;
    bool any = false;
    for (std::size_t q = 0; q < count; ++q) {
      std::size_t g = b + (count == e - b ? q : static_cast<std::size_t>(unif(rng) * (e - b)) % (e - b));
      CartanVector mu_t = ball.mu_theta(g, theta);
      for (int s = 0; s < opts.samples_per_element; ++s) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = normal(rng);
        v.array() -= v.mean();
        v *= R * unif(rng) / std::max(v.norm(), 1e-300);
        Mat h = random_orthogonal(d, rng) * v.array().exp().matrix().asDiagonal() * random_orthogonal(d, rng);
        CartanVector sigma;
        try {
          if (!eng.needs_quad(g)) {
            Mat gh = ball.matrix(g) * h;
            PartialFlag xi = attractor_flag(gh, theta);
            Word inv = ball.word(g);
            std::reverse(inv.begin(), inv.end());
            for (int& x : inv) x = -x;
            Mat ginv = gens.evaluate(inv).matrix();
            sigma = iwasawa_sigma(ginv, xi.frame());
          } else {
            QMat gq = eng.quad_element(g);
            QMat u;
            QVec sv = quad_singular_values(gq * to_quad(h), &u);
            bool ok = true;
            for (int c : theta.indices())
              if (!(sv[c - 1] > sv[c] * (1 + 1e-6))) ok = false;
            if (!ok) continue;
            Word inv = ball.word(g);
            std::reverse(inv.begin(), inv.end());
            for (int& x : inv) x = -x;
            QVec logr;
            quad_qr_frame(quad_word_product(qg, qi, inv) * u, &logr);
            Vec lr(d);
            for (int i = 0; i < d; ++i) lr[i] = static_cast<double>(logr[i]);
            sigma = CartanVector::centered(lr);
          }
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::degenerate_attractor) continue;
          throw;
        }
        CartanVector beta = p_theta(-sigma, theta);
        double defect = (beta - mu_t).norm();
        worst = std::max(worst, defect / R);
        any = true;
        ++rep.pairs;
      }
    }
    if (any) {
      rep.lengths.push_back(n);
      rep.kappa_by_length.push_back(worst);
      rep.kappa = std::max(rep.kappa, worst);
    }
  }
  if (rep.pairs == 0) throw Error(ErrorKind::insufficient_data, "no shadow samples (all attractors degenerate)");
  return rep;
}

double antipodality_margin(const OrbitBall& ball, const ThetaSet& theta, int length, std::size_t max_elements) {
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "theta and ball differ in d");
  ThetaSet it = theta.iota();
  std::size_t b = ball.length_begin(length), e = ball.length_end(length);
  std::vector<PartialFlag> xs, ys;
  std::vector<int> first;
  std::size_t n = e > b ? e - b : 0;
  std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, max_elements));
  for (std::size_t i = b; i < e; i += stride) {
    if (!has_attractor(ball, i, theta) || !has_attractor(ball, i, it)) continue;
    xs.push_back(attractor_flag(ball, i, theta));
    ys.push_back(attractor_flag(ball, i, it));
    first.push_back(ball.word(i).front());
  }
  if (xs.size() < 2) throw Error(ErrorKind::insufficient_data, "too few attractor flags at this length");
  double m = 1.0;
  bool any = false;
  for (std::size_t p = 0; p < xs.size(); ++p)
    for (std::size_t q = 0; q < xs.size(); ++q) {
      if (first[p] == first[q]) continue;
      m = std::min(m, general_position_margin(xs[p], ys[q]));
      any = true;
    }
  if (!any) throw Error(ErrorKind::insufficient_data, "all sampled words start with the same letter");
  return m;
}

}  // namespace pslab
