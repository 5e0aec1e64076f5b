#include "pslab/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pslab/typea.hpp"
#include "pslab/wedge.hpp"
#include "shadow_engine.hpp"

namespace pslab {

namespace {

double log_sum_exp(const std::vector<double>& x) {
  double m = *std::max_element(x.begin(), x.end());
  double acc = 0, comp = 0;
  for (double v : x) {
    double y = std::exp(v - m) - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return m + std::log(acc);
}

detail::FlagSource source_of(AtomPlacement p) {
  return p == AtomPlacement::attractor ? detail::FlagSource::attractor : detail::FlagSource::base_orbit;
}

}  // namespace

double AtomicMeasure::total_mass() const {
  double acc = 0, comp = 0;
  for (double w : weight_) {
    double y = w - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

AtomicMeasure AtomicMeasure::from_atoms(const LinearForm& psi, double s, const std::vector<PartialFlag>& atoms,
                                        const std::vector<double>& weights) {
  if (atoms.size() != weights.size()) throw Error(ErrorKind::precondition, "atoms and weights differ in length");
  if (atoms.empty()) throw Error(ErrorKind::empty_measure, "measure without atoms");
  AtomicMeasure m;
  m.psi_ = psi;
  m.s_ = s;
  m.placement_ = AtomPlacement::base_orbit;
  const int d = psi.theta().d();
  std::vector<double> logw;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k].theta() != psi.theta()) throw Error(ErrorKind::signature, "atom type differs from the form's theta");
    if (!(weights[k] > 0) || !std::isfinite(weights[k]))
      throw Error(ErrorKind::precondition, "atom weights must be positive and finite");
    logw.push_back(std::log(weights[k]));
    m.frames_.insert(m.frames_.end(), atoms[k].frame().data(), atoms[k].frame().data() + d * d);
    m.element_.push_back(0);
  }
  double lse = log_sum_exp(logw);
  for (double v : logw) {
    m.logw_.push_back(v - lse);
    m.weight_.push_back(std::exp(v - lse));
  }
  return m;
}

AtomicMeasure patterson_measure(const OrbitBall& ball, const LinearForm& psi, double s, const PattersonOptions& opts) {
  const ThetaSet& th = psi.theta();
  if (th.d() != ball.d()) throw Error(ErrorKind::signature, "form and ball differ in d");
  if (!std::isfinite(s)) throw Error(ErrorKind::precondition, "exponent s must be finite");
  const int d = ball.d();
  AtomicMeasure m;
  m.psi_ = psi;
  m.s_ = s;
  m.L_ = ball.max_length();
  m.placement_ = opts.placement;

  std::vector<double> values = form_values(ball, psi);
  if (opts.check_exponent) {
    try {
      ExponentEstimate e = critical_exponent(ball, psi);
      if (s < e.ci_low)
        throw Error(ErrorKind::precondition, "s = " + std::to_string(s) + " is below the critical exponent estimate " +
                                                 std::to_string(e.value));
      if (s <= e.ci_high)
        m.warning_ = "s lies inside the confidence interval of the critical exponent estimate";
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::precondition || err.kind() == ErrorKind::properness) throw;
      m.warning_ = std::string("critical exponent unavailable: ") + err.what();
    }
  }

  std::vector<Vec> base_wedges;
  if (opts.placement == AtomPlacement::base_orbit) {
    if (opts.base_frame.size() == 0) {
      Rng rng(opts.seed);
      m.base_ = random_orthogonal(d, rng);
    } else {
      if (opts.base_frame.rows() != d || opts.base_frame.cols() != d)
        throw Error(ErrorKind::signature, "base frame has the wrong size");
      m.base_ = PartialFlag(ThetaSet::full(d), opts.base_frame).frame();
    }
    for (int c = 1; c < d; ++c) base_wedges.push_back(wedge_of_columns(m.base_, c));
  }

  std::vector<double> logw;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    Mat frame;
    if (opts.placement == AtomPlacement::attractor) {
      if (!has_attractor(ball, i, th, opts.gap_tol)) continue;
      frame = attractor_flag(ball, i, th, opts.gap_tol).frame();
    } else if (i == 0) {
      frame = m.base_;
    } else {
      std::vector<Mat> nested;
      for (int c : th.indices()) {
        Vec w = ball.wedge(i, c) * base_wedges[c - 1];
        nested.push_back(subspace_of_wedge(w / w.norm(), d, c));
      }
      frame = frame_from_subspaces(nested, d);
    }
    logw.push_back(-s * values[i]);
    m.element_.push_back(i);
    m.frames_.insert(m.frames_.end(), frame.data(), frame.data() + d * d);
  }
  if (logw.empty()) throw Error(ErrorKind::empty_measure, "every attractor in the ball is degenerate");
  double lse = log_sum_exp(logw);
  m.logw_.reserve(logw.size());
  m.weight_.reserve(logw.size());
  for (double v : logw) {
    m.logw_.push_back(v - lse);
    m.weight_.push_back(std::exp(v - lse));
  }
  return m;
}

namespace {

struct AtomIndex {
  std::vector<detail::FlagRef> refs;
  detail::SubspaceIndex index;
  AtomIndex(const AtomicMeasure& nu, const std::vector<std::size_t>& atoms)
      : index(nu.d(), nu.theta().indices().front()) {
    auto src = source_of(nu.placement());
    bool from_ball = nu.ball_length() > 0 || nu.placement() == AtomPlacement::attractor;
    std::vector<const double*> frames;
    for (std::size_t k : atoms) {
      refs.push_back({nu.frame_data(k), from_ball ? src : detail::FlagSource::exact, nu.element(k)});
      frames.push_back(nu.frame_data(k));
    }
    index.build(frames);
  }
};

void check_measure(const AtomicMeasure& nu, const OrbitBall& ball) {
  if (nu.size() == 0) throw Error(ErrorKind::empty_measure, "measure without atoms");
  if (nu.d() != ball.d()) throw Error(ErrorKind::signature, "measure and ball differ in d");
  if (nu.ball_length() > 0 && nu.ball_length() > ball.max_length())
    throw Error(ErrorKind::precondition, "measure was built on a larger ball than the one supplied");
}

}  // namespace

ShadowLemmaReport shadow_lemma_check(const AtomicMeasure& nu, const OrbitBall& ball, double r,
                                     const ShadowLemmaOptions& opts) {
  if (!(r > 0)) throw Error(ErrorKind::precondition, "shadow radius must be positive");
  check_measure(nu, ball);
  const ThetaSet& th = nu.theta();
  const int L = ball.max_length();
  ShadowLemmaReport rep;
  rep.tier = opts.tier > 0 ? opts.tier : (L + 1) / 2;
  if (rep.tier > L) throw Error(ErrorKind::insufficient_data, "tier exceeds the ball length");
  std::size_t b = ball.length_begin(rep.tier), e = ball.length_end(rep.tier);
  std::size_t n = e - b;
  std::size_t take = opts.max_elements > 0 ? std::min(opts.max_elements, n) : n;
  for (std::size_t q = 0; q < take; ++q) rep.elements.push_back(b + q * n / take);

  std::vector<std::size_t> all(nu.size());
  std::iota(all.begin(), all.end(), 0);
  AtomIndex ai(nu, all);
  detail::ShadowEngine eng(ball, th, opts.shadow, nu.base_frame());
  LinearForm conf = nu.psi().scaled(nu.s());

  bool any = false;
  for (std::size_t g : rep.elements) {
    Mat gf = detail::element_frame(ball, g, th);
    double mass = 0;
    detail::for_each_member(
        eng, ai.index, ai.refs, g, gf, r, [](std::uint32_t) { return false; },
        [&](std::uint32_t k, const ShadowResult&) { mass += nu.weight(k); });
    rep.mass.push_back(mass);
    rep.ratio.push_back(mass * std::exp(conf.eval(ball.mu(g))));
    if (mass > 0) any = true; else ++rep.empty_shadows;
  }
  if (!any) throw Error(ErrorKind::radius_too_small, "every tested shadow has zero mass; try a larger radius");
  rep.min_ratio = *std::min_element(rep.ratio.begin(), rep.ratio.end());
  rep.max_ratio = *std::max_element(rep.ratio.begin(), rep.ratio.end());
  rep.band = rep.min_ratio > 0 ? rep.max_ratio / rep.min_ratio : INFINITY;
  rep.pass = std::isfinite(rep.band) && rep.min_ratio >= opts.band_low && rep.max_ratio <= opts.band_high;
  return rep;
}

ConicalMassReport conical_mass_estimate(const AtomicMeasure& nu, const OrbitBall& ball, double N,
                                        const ConicalMassOptions& opts) {
  if (!(N > 0)) throw Error(ErrorKind::precondition, "conical radius must be positive");
  check_measure(nu, ball);
  const ThetaSet& th = nu.theta();
  const int L = ball.max_length();
  ConicalMassReport rep;
  rep.window_high = opts.window_high > 0 ? std::min(opts.window_high, L) : L;
  rep.window_low = opts.window_low > 0 ? opts.window_low : (L + 1) / 2;
  if (rep.window_low > rep.window_high) throw Error(ErrorKind::precondition, "empty length window");

  // deepest window length whose shadow holds the atom; 0 = none
  std::vector<int> deepest(nu.size(), 0);
  const bool own_shadow = nu.placement() == AtomPlacement::attractor && nu.ball_length() > 0;
  std::vector<std::vector<std::size_t>> own_by_length(L + 1);
  if (own_shadow)
    for (std::size_t k = 0; k < nu.size(); ++k) {
      int n = ball.length(nu.element(k));
      if (n >= rep.window_low && n <= rep.window_high) own_by_length[n].push_back(k);
    }

  // atoms settled by their own shadow at the top length need no index entry
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < nu.size(); ++k)
    if (!(own_shadow && ball.length(nu.element(k)) == rep.window_high)) open.push_back(k);
  AtomIndex ai(nu, open);
  detail::ShadowEngine eng(ball, th, opts.shadow, nu.base_frame());

  for (int n = rep.window_high; n >= rep.window_low; --n) {
    // the attractor of gamma lies in every shadow of gamma
    for (std::size_t k : own_by_length[n])
      if (deepest[k] == 0) deepest[k] = n;
    for (std::size_t g = ball.length_begin(n); g < ball.length_end(n); ++g) {
      Mat gf = detail::element_frame(ball, g, th);
      detail::for_each_member(
          eng, ai.index, ai.refs, g, gf, N, [&](std::uint32_t q) { return deepest[open[q]] != 0; },
          [&](std::uint32_t q, const ShadowResult&) { deepest[open[q]] = n; });
      ++rep.tests;
    }
  }

  for (int n = rep.window_high; n >= rep.window_low; --n) {
    double acc = 0;
    for (std::size_t k = 0; k < nu.size(); ++k)
      if (deepest[k] >= n) acc += nu.weight(k);
    rep.trend_low.push_back(n);
    rep.trend_fraction.push_back(acc);
  }
  rep.fraction = rep.trend_fraction.back();
  for (int v : deepest)
    if (v > 0) ++rep.atoms_inside;
  return rep;
}

ConicalMassReport lebesgue_conical_mass(const OrbitBall& ball, const ThetaSet& theta, double N, std::size_t samples,
                                        std::uint64_t seed, const ConicalMassOptions& opts) {
  if (ball.d() == 2)
    throw Error(ErrorKind::unsupported, "Lebesgue conical mass is not supported for d = 2");
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "theta and ball differ in d");
  if (samples == 0) throw Error(ErrorKind::precondition, "need at least one sample");
  Rng rng(seed);
  std::vector<PartialFlag> atoms;
  for (std::size_t k = 0; k < samples; ++k) atoms.push_back(PartialFlag::random(theta, rng));
  AtomicMeasure nu = AtomicMeasure::from_atoms(rho_form(theta.d(), theta), 1.0, atoms,
                                               std::vector<double>(samples, 1.0));
  return conical_mass_estimate(nu, ball, N, opts);
}

EntropyDropReport entropy_drop_experiment(const GeneratorSet& gens, const std::vector<Word>& subgroup_words,
                                          const LinearForm& psi, int L, const ExponentOptions& opts) {
  if (subgroup_words.empty()) throw Error(ErrorKind::precondition, "subgroup needs at least one generator");
  std::vector<GroupElement> sub;
  std::vector<std::string> labels;
  for (const Word& w : subgroup_words) {
    if (w.empty()) throw Error(ErrorKind::precondition, "empty subgroup generator word");
    sub.push_back(gens.evaluate(w));
    labels.push_back(gens.word_string(w));
  }
  GeneratorSet subgens(sub, labels);
  EntropyDropReport rep;
  rep.group = critical_exponent(enumerate_ball(gens, L), psi, opts);
  rep.subgroup = critical_exponent(enumerate_ball(subgens, L), psi, opts);
  rep.gap = rep.group.value - rep.subgroup.value;
  rep.gap_beyond_ci = rep.subgroup.ci_high < rep.group.ci_low;
  return rep;
}

}  // namespace pslab
