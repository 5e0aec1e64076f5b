#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "pslab/orbit.hpp"

namespace pslab {

inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

struct ExponentEstimate {
  double value = 0;
  double ci_low = 0;
  double ci_high = 0;
  // fit window in value units and in word lengths
  double t_low = 0;
  double t_high = 0;
  int length_low = 0;
  int length_high = 0;
  std::size_t points = 0;
  bool polynomial = false;  // sphere sizes grow polynomially; value set to 0
  bool empty() const { return value == kMinusInfinity; }
};

struct ExponentOptions {
  double properness_tol = 1e-9;
  int bootstrap = 200;
  std::uint64_t seed = 0x5eed;
  int max_points = 512;
  int min_points = 8;
  bool detect_polynomial = true;
};

double poincare_partial_sum(const OrbitBall& ball, const LinearForm& psi, double s);

// psi(mu_theta(gamma)) for every element, after the properness screen.
std::vector<double> form_values(const OrbitBall& ball, const LinearForm& psi, double tol = 1e-9);

ExponentEstimate critical_exponent(const OrbitBall& ball, const LinearForm& psi, const ExponentOptions& opts = {});
// Growth rate of ||mu_theta||.
ExponentEstimate norm_exponent(const OrbitBall& ball, const ThetaSet& theta, const ExponentOptions& opts = {});
// Slope estimator on arbitrary values; lengths[k] is the word length of values[k].
// Window thresholds come from reference values (all elements) so restricted counts share them.
ExponentEstimate counting_exponent(const std::vector<double>& values, const std::vector<int>& lengths,
                                   const std::vector<double>& reference_values,
                                   const std::vector<int>& reference_lengths, int max_length,
                                   const ExponentOptions& opts);

// Series cross-check: s where the two halves of the fit window carry equal weight.
double critical_exponent_bisection(const OrbitBall& ball, const LinearForm& psi, const ExponentOptions& opts = {});

struct ConeSpec {
  ThetaSet theta;
  Vec direction;  // unit, in a_theta
  std::vector<double> apertures{0.4, 0.2, 0.1, 0.05};
  ConeSpec() = default;
  ConeSpec(ThetaSet th, Vec u, std::vector<double> eps = {0.4, 0.2, 0.1, 0.05});
};

struct ApertureEstimate {
  double aperture = 0;
  std::size_t count = 0;
  ExponentEstimate estimate;
};

std::vector<ApertureEstimate> directional_tau(const OrbitBall& ball, const ConeSpec& cone,
                                              const ExponentOptions& opts = {});

struct IndicatorOptions {
  std::vector<double> apertures{0.4, 0.2, 0.1, 0.05};
  double stabilization_tol = 0.05;
  ExponentOptions exponent;
};

struct IndicatorGrid {
  ThetaSet theta;
  std::vector<Vec> directions;  // as supplied (not necessarily unit)
  std::vector<double> values;   // psi-hat, -inf marker allowed
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> chosen_aperture;
  std::vector<std::vector<ApertureEstimate>> curves;
};

IndicatorGrid growth_indicator(const OrbitBall& ball, const ThetaSet& theta, const std::vector<Vec>& directions,
                               const IndicatorOptions& opts = {});

struct LimitConeEstimate {
  ThetaSet theta;
  std::vector<Vec> sample_directions;
  std::vector<Vec> extreme_rays;
  double bounded_distance = 0;
  double hausdorff_slack = 0;
  double angular_width = 0;  // largest angle between two extreme rays
  int dimension = 0;
  bool exact_hull = true;
};

LimitConeEstimate limit_cone(const OrbitBall& ball, const ThetaSet& theta, double cutoff);
// count unit directions spread between the two extreme rays of widest angle; the single
// ray when the cone is a half-line.
std::vector<Vec> cone_directions(const LimitConeEstimate& cone, int count);
// Euclidean distance from x to the cone spanned by the columns of rays.
double distance_to_cone(const Vec& x, const Mat& rays);
// Non-negative least squares min ||A c - b||, c >= 0.
Vec nnls(const Mat& A, const Vec& b);

struct TangencyReport {
  bool pass = true;
  ExponentEstimate delta;
  std::vector<std::size_t> violations;
  std::vector<double> margin;  // delta*psi(u) - psihat(u) + slack per direction
  long contact_index = -1;
  double contact_ratio = 0;
};

TangencyReport tangency_check(const OrbitBall& ball, const LinearForm& psi, const IndicatorGrid& grid,
                              const ExponentOptions& opts = {});
TangencyReport tangency_check(const ExponentEstimate& delta, const LinearForm& psi, const IndicatorGrid& grid);

struct ConcavityReport {
  bool pass = true;
  std::size_t triples = 0;
  std::vector<std::array<std::size_t, 3>> violations;
  double worst = 0;
};

ConcavityReport concavity_check(const IndicatorGrid& grid, double slack = 0.0);

}  // namespace pslab
