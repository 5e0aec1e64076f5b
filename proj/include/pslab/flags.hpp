#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pslab/orbit.hpp"

namespace pslab {

// Flag of leading left-singular subspaces. Throws degenerate_attractor when
// 1 - exp(-alpha_c(mu(g))) <= gap_tol for some c in theta.
PartialFlag attractor_flag(const Mat& g, const ThetaSet& theta, double gap_tol = 1e-6);
PartialFlag attractor_flag(const GroupElement& g, const ThetaSet& theta, double gap_tol = 1e-6);
// Same flag read off the stored exterior powers, which stays accurate for deep words.
PartialFlag attractor_flag(const OrbitBall& ball, std::size_t i, const ThetaSet& theta, double gap_tol = 1e-6);
bool has_attractor(const OrbitBall& ball, std::size_t i, const ThetaSet& theta, double gap_tol = 1e-6);
// gamma_i . xi from the exterior powers of gamma_i (accurate for deep words when xi is generic).
PartialFlag transformed_flag(const OrbitBall& ball, std::size_t i, const PartialFlag& xi);

// min over c in theta of sigma_min([xi_c | eta_{d-c}]); eta must have type iota(theta).
double general_position_margin(const PartialFlag& xi, const PartialFlag& eta);

struct ShadowSpec {
  GroupElement viewpoint;
  GroupElement target;
  double radius = 1.0;
  ThetaSet theta;
  ShadowSpec() = default;
  ShadowSpec(GroupElement p, GroupElement q, double r, ThetaSet th);
};

struct ShadowOptions {
  int multistarts = 8;
  double tol = 1e-8;
  int max_iter = 2000;
  std::uint64_t seed = 0x5eed;
  bool screens = true;  // cheap accept/reject tests in bulk routines
  // ball elements with mu_1 - mu_d above this are handled in quad precision
  double quad_log_condition = 28.0;
};

enum class ShadowStage { screen_reject, quick_accept, quick_reject, optimized, exact };

struct ShadowResult {
  bool member = false;
  // Minimal distance. After a screen it is only a bound: a lower bound for
  // screen_reject and quick_reject, an upper bound for quick_accept.
  double d_min = 0;
  ShadowStage stage = ShadowStage::optimized;
  // false when theta is not full: the completion inside each block is a heuristic
  // choice, so d_min is an upper bound and membership is never over-reported
  bool completion_exact = true;
};

ShadowResult shadow_contains(const PartialFlag& xi, const ShadowSpec& spec, const ShadowOptions& opts = {});

// Minimizes ||mu(exp(-v) h0)|| over v with mu + v dominant; returns the distance and the minimizer v.
struct FlatDistance {
  double value = 0;
  Vec v;
  int iterations = 0;
  bool lower_bound = false;  // stopped early: value is a lower bound above stop_below
};
FlatDistance flat_distance(const Mat& h0, const Vec& mu, const ShadowOptions& opts, double radius_hint);
// Stops as soon as the distance drops to stop_below (the result is then an upper bound)
// or provably stays above it.
FlatDistance flat_distance_until(const Mat& h0, const Vec& mu, const ShadowOptions& opts, double radius_hint,
                                 double stop_below);

// ||mu(h)||, the distance from o to h o.
double log_singular_norm(const Mat& h);

struct MultiplicityOptions {
  // flags to test; when empty, sampled from Patterson weights on the ball plus Haar-random flags
  std::vector<PartialFlag> flags;
  std::size_t atom_samples = 1500;
  std::size_t random_flags = 200;
  double s = 0;  // exponent for the sampled atoms; 0 = critical estimate + 0.05
  std::uint64_t seed = 0x5eed;
  ShadowOptions shadow;
};

struct MultiplicityReport {
  std::size_t max_count = 0;
  std::size_t window_size = 0;
  std::size_t flags_tested = 0;
  PartialFlag witness;
  std::vector<std::string> witness_words;
};

MultiplicityReport shadow_multiplicity(const OrbitBall& ball, double R, const LinearForm& phi, double T, double D,
                                       const MultiplicityOptions& opts = {});

struct ConicalProbe {
  std::vector<std::size_t> per_length;  // witnesses by word length
  std::size_t witnesses = 0;
  bool conical_trend = false;  // every length in the top third has a witness
};

ConicalProbe conical_membership_probe(const PartialFlag& xi, const OrbitBall& ball, double N,
                                      const ShadowOptions& opts = {});

struct BusemannCartanOptions {
  int min_length = 1;
  int max_length = 0;  // 0 = ball length
  std::size_t elements = 400;
  int samples_per_element = 4;
  std::uint64_t seed = 0x5eed;
};

struct BusemannCartanReport {
  double kappa = 0;
  std::vector<int> lengths;
  std::vector<double> kappa_by_length;
  std::size_t pairs = 0;
};

// Samples xi in O_R(o, gamma o) as attractor flags of gamma h with ||mu(h)|| <= R.
BusemannCartanReport busemann_vs_cartan_check(const OrbitBall& ball, const ThetaSet& theta, double R,
                                              const BusemannCartanOptions& opts = {});

// Smallest general position margin between attractor flags (theta) and (iota theta) of
// elements of the given length whose words start with different letters.
double antipodality_margin(const OrbitBall& ball, const ThetaSet& theta, int length, std::size_t max_elements = 400);

}  // namespace pslab
