#pragma once

#include <string>
#include <vector>

#include "pslab/flags.hpp"
#include "pslab/growth.hpp"

namespace pslab {

// Where the atom of gamma sits. attractor: leading singular flag of gamma (skipped when
// degenerate). base_orbit: gamma applied to a fixed generic base flag.
enum class AtomPlacement { attractor, base_orbit };

struct PattersonOptions {
  AtomPlacement placement = AtomPlacement::base_orbit;
  double gap_tol = 1e-6;
  // frame of the base flag for base_orbit placement; empty = Haar-random from seed
  Mat base_frame;
  std::uint64_t seed = 0x5eed;
  bool check_exponent = true;  // compare s with the critical exponent estimate
};

// Normalized weighted atoms on F_theta. Frames are stored flat, d*d doubles per atom.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;

  const ThetaSet& theta() const { return psi_.theta(); }
  const LinearForm& psi() const { return psi_; }
  double s() const { return s_; }
  int ball_length() const { return L_; }
  AtomPlacement placement() const { return placement_; }
  const Mat& base_frame() const { return base_; }
  int d() const { return psi_.theta().d(); }

  std::size_t size() const { return weight_.size(); }
  double weight(std::size_t k) const { return weight_[k]; }
  double log_weight(std::size_t k) const { return logw_[k]; }
  // ball index of the element that produced atom k
  std::size_t element(std::size_t k) const { return element_[k]; }
  const double* frame_data(std::size_t k) const { return &frames_[k * d() * d()]; }
  Eigen::Map<const Mat> frame(std::size_t k) const { return Eigen::Map<const Mat>(frame_data(k), d(), d()); }
  PartialFlag atom(std::size_t k) const { return PartialFlag(theta(), Mat(frame(k))); }
  double total_mass() const;
  // empty unless s was close to (or below) the exponent estimate
  const std::string& warning() const { return warning_; }

  // Assembles a measure from explicit atoms; weights are normalized.
  static AtomicMeasure from_atoms(const LinearForm& psi, double s, const std::vector<PartialFlag>& atoms,
                                  const std::vector<double>& weights);

 private:
  friend AtomicMeasure patterson_measure(const OrbitBall&, const LinearForm&, double, const PattersonOptions&);
  LinearForm psi_;
  double s_ = 0;
  int L_ = 0;
  AtomPlacement placement_ = AtomPlacement::attractor;
  Mat base_;
  std::vector<double> weight_, logw_;
  std::vector<std::size_t> element_;
  std::vector<double> frames_;
  std::string warning_;
};

AtomicMeasure patterson_measure(const OrbitBall& ball, const LinearForm& psi, double s,
                                const PattersonOptions& opts = {});

struct ShadowLemmaOptions {
  int tier = 0;  // word length of the tested elements; 0 = ceil(L/2)
  std::size_t max_elements = 0;  // 0 = the whole tier
  double band_low = 1e-4;
  double band_high = 1e4;
  ShadowOptions shadow;
};

struct ShadowLemmaReport {
  int tier = 0;
  std::vector<std::size_t> elements;
  std::vector<double> mass;   // nu(O_r(o, gamma o))
  std::vector<double> ratio;  // mass * exp(s psi(mu_theta(gamma)))
  double min_ratio = 0;
  double max_ratio = 0;
  double band = 0;  // max / min, infinite when some shadow has no mass
  std::size_t empty_shadows = 0;
  bool pass = false;
};

// Ratios are normalized by exp(s psi(mu_theta)), the form to which nu is asymptotically conformal.
ShadowLemmaReport shadow_lemma_check(const AtomicMeasure& nu, const OrbitBall& ball, double r,
                                     const ShadowLemmaOptions& opts = {});

struct ConicalMassOptions {
  int window_low = 0;   // 0 = ceil(L/2)
  int window_high = 0;  // 0 = L
  ShadowOptions shadow;
};

struct ConicalMassReport {
  double fraction = 0;  // mass inside the union over the whole window
  int window_low = 0;
  int window_high = 0;
  // fraction for the windows [n, window_high], n = window_high down to window_low
  std::vector<int> trend_low;
  std::vector<double> trend_fraction;
  std::size_t atoms_inside = 0;
  std::size_t tests = 0;
};

ConicalMassReport conical_mass_estimate(const AtomicMeasure& nu, const OrbitBall& ball, double N,
                                        const ConicalMassOptions& opts = {});

// Fraction of Haar-random flags in the shadow union of the window; d = 2 is unsupported.
ConicalMassReport lebesgue_conical_mass(const OrbitBall& ball, const ThetaSet& theta, double N, std::size_t samples,
                                        std::uint64_t seed = 0x5eed, const ConicalMassOptions& opts = {});

struct EntropyDropReport {
  ExponentEstimate group;
  ExponentEstimate subgroup;
  double gap = 0;
  bool gap_beyond_ci = false;  // subgroup ci_high < group ci_low
};

// The subgroup is generated by the given words in the generators of gens; both balls use length L.
EntropyDropReport entropy_drop_experiment(const GeneratorSet& gens, const std::vector<Word>& subgroup_words,
                                          const LinearForm& psi, int L, const ExponentOptions& opts = {});

// ---- Hopf coordinates and the BMS exponent

// g with g P_theta = xi and g w0 P_iota(theta) = eta, det 1; throws ill_conditioned when the
// general position margin is below min_margin.
GroupElement transverse_pair_element(const PartialFlag& xi, const PartialFlag& eta, double min_margin = 1e-6);
// psi(beta_{g P}(e, g) + iota beta_{g w0 P}(e, g)).
double bms_exponent_of(const GroupElement& g, const LinearForm& psi);
double bms_exponent(const PartialFlag& xi, const PartialFlag& eta, const LinearForm& psi);
// Random element of the Levi subgroup of theta: block diagonal, det 1.
GroupElement random_levi(const ThetaSet& theta, Rng& rng, double spread = 1.0);

struct HopfPoint {
  PartialFlag xi;
  PartialFlag eta;
  CartanVector u;  // in a_theta
  double margin = 0;
  bool degenerate = false;  // set by hopf_act when the image margin fell below tolerance
  HopfPoint() = default;
  HopfPoint(PartialFlag xi, PartialFlag eta, CartanVector u);
};

HopfPoint hopf_act(const GroupElement& gamma, const HopfPoint& x, double margin_tol = 1e-12);

// p_theta sigma(gamma, xi), computed from exterior powers so deep ball elements stay accurate.
CartanVector busemann_translation(const OrbitBall& ball, std::size_t gamma, const PartialFlag& xi);

struct PropernessReport {
  std::vector<int> lengths;
  std::vector<double> minima;
  std::vector<std::size_t> counts;
  std::size_t passed = 0;
  bool increasing_top_half = false;
};

PropernessReport properness_probe(const OrbitBall& ball, const HopfPoint& x, const LinearForm& phi, double m);

}  // namespace pslab
