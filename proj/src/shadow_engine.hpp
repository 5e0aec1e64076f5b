#pragma once
// Bulk shadow membership against the elements of an orbit ball.

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "pslab/flags.hpp"
#include "pslab/precise.hpp"

namespace pslab::detail {

enum class FlagSource { exact, attractor, base_orbit };

// Flag plus what is needed to recompute it in quad precision.
struct FlagRef {
  const double* frame = nullptr;  // d x d column-major
  FlagSource source = FlagSource::exact;
  std::size_t index = 0;  // ball element for attractor and base_orbit flags
};

class ShadowEngine {
 public:
  ShadowEngine(const OrbitBall& ball, ThetaSet theta, ShadowOptions opts, Mat base_frame = Mat());

  const OrbitBall& ball() const { return ball_; }
  const ThetaSet& theta() const { return theta_; }
  const ShadowOptions& options() const { return opts_; }
  bool needs_quad(std::size_t gamma) const { return ball_.log_condition(gamma) > opts_.quad_log_condition; }

  // Is the flag in O_r(o, gamma o)? In bulk mode the screens may settle the answer early.
  ShadowResult test(std::size_t gamma, const FlagRef& f, double r, bool bulk = true);
  // Necessary condition for membership from the exterior powers of gamma.
  bool screen_reject(std::size_t gamma, const double* frame, double r, double* bound = nullptr) const;

  const QMat& quad_element(std::size_t i);
  QMat quad_frame(const FlagRef& f);

  std::size_t quad_evaluations() const { return quad_count_; }

 private:
  Mat aligned_block_rotation(const Mat& frame, const Mat& gamma) const;
  const OrbitBall& ball_;
  ThetaSet theta_;
  ShadowOptions opts_;
  Mat base_;
  std::vector<QMat> qgens_, qinv_;
  std::unordered_map<std::size_t, QMat> qcache_;
  std::unordered_map<std::size_t, QMat> qframes_;
  std::size_t quad_count_ = 0;
};

// Attractor frame of a ball element, identity when the attractor is degenerate.
Mat element_frame(const OrbitBall& ball, std::size_t i, const ThetaSet& theta);

// R-tree over the projectors onto the first meaningful subspace of each flag.
class SubspaceIndex {
 public:
  SubspaceIndex(int d, int dim);
  ~SubspaceIndex();
  SubspaceIndex(SubspaceIndex&&) noexcept;
  // Each entry points at a d x d column-major frame that must outlive the index.
  void build(const std::vector<const double*>& frames);
  // Indices whose projector lies within Frobenius distance radius.
  std::vector<std::uint32_t> query(const Mat& frame, double radius) const;
  double distance(const Mat& a, const double* b) const;
  std::size_t size() const { return frames_.size(); }

 private:
  struct Impl;
  int d_, dim_;
  std::vector<const double*> frames_;
  std::unique_ptr<Impl> impl_;
};

// Heuristic radius (projector distance) containing the first subspace of every
// member of O_r(o, gamma o); callers enlarge it when members land near the edge.
double candidate_radius(const double* mu, const ThetaSet& theta, double r);
double max_projector_distance(int d, int dim);

// Calls on_member(flag, result) for every flag in O_r(o, gamma o) among the
// indexed flags, skipping those for which skip(flag) is true.
template <class Skip, class OnMember>
void for_each_member(ShadowEngine& eng, const SubspaceIndex& index, const std::vector<FlagRef>& flags,
                     std::size_t gamma, const Mat& gamma_frame, double r, Skip skip, OnMember on_member) {
  const ThetaSet& th = eng.theta();
  double rho = candidate_radius(eng.ball().mu(gamma), th, r);
  const double cap = max_projector_distance(th.d(), th.indices().front());
  double tested_radius = -1;
  while (true) {
    double far = 0;
    for (std::uint32_t k : index.query(gamma_frame, rho)) {
      if (skip(k)) continue;
      double dist = index.distance(gamma_frame, flags[k].frame);
      if (dist <= tested_radius) continue;
      ShadowResult res = eng.test(gamma, flags[k], r);
      if (res.member) {
        far = std::max(far, dist);
        on_member(k, res);
      }
    }
    if (rho >= cap || far <= 0.5 * rho) break;
    tested_radius = rho;
    rho = std::min(cap, 4 * rho);
  }
}

}  // namespace pslab::detail
