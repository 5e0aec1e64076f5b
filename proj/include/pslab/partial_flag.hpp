#pragma once

#include "pslab/core.hpp"

namespace pslab {

// Point of F_theta. Only the spans of the first c columns, c in theta, carry meaning.
class PartialFlag {
 public:
  PartialFlag() = default;
  PartialFlag(ThetaSet theta, Mat frame);
  static PartialFlag standard(const ThetaSet& theta);
  static PartialFlag random(const ThetaSet& theta, Rng& rng);

  const ThetaSet& theta() const { return theta_; }
  const Mat& frame() const { return frame_; }
  int d() const { return theta_.d(); }
  Mat subspace(int dim) const { return frame_.leftCols(dim); }

  // g.xi, frame taken from the QR factorization of g*frame.
  PartialFlag transformed(const Mat& g) const;
  // Same flag, frame rotated inside each block.
  PartialFlag recompleted(Rng& rng) const;
  // Largest principal-angle sine over the meaningful subspaces.
  double distance(const PartialFlag& o) const;
  bool same_as(const PartialFlag& o, double tol = 1e-7) const { return distance(o) <= tol; }

 private:
  ThetaSet theta_;
  Mat frame_;
};

}  // namespace pslab
