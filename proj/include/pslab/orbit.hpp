#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "pslab/core.hpp"

namespace pslab {

class GeneratorSet {
 public:
  GeneratorSet() = default;
  GeneratorSet(std::vector<GroupElement> gens, std::vector<std::string> labels = {});

  int d() const { return d_; }
  int rank() const { return static_cast<int>(gens_.size()); }
  const GroupElement& gen(int k) const { return gens_.at(k); }
  const std::vector<std::string>& labels() const { return labels_; }
  // Letters in enumeration order: 1, -1, 2, -2, ...
  std::vector<int> letters() const;
  const Mat& letter_matrix(int letter) const;
  // j-th exterior power of a letter, 1 <= j <= d-1.
  const Mat& letter_wedge(int letter, int j) const;

  // Words longer than long_word_cutoff are multiplied in quad precision.
  GroupElement evaluate(const Word& w) const;
  std::string word_string(const Word& w) const { return pslab::word_string(w, labels_); }
  int long_word_cutoff = 64;

 private:
  int d_ = 0;
  std::vector<GroupElement> gens_;
  std::vector<Mat> inv_;
  std::vector<std::string> labels_;
  // wedges_[2k] for letter k+1, wedges_[2k+1] for -(k+1); inner index j-1
  std::vector<std::vector<Mat>> wedges_;
};

struct EnumerationOptions {
  std::size_t max_elements = 8'000'000;
  double dedup_tol = 1e-8;
  int threads = 0;  // 0 = hardware concurrency
};

// Orbit ball with flat storage. Element 0 is the identity; elements are sorted by
// word length, then lexicographically with letter order 1,-1,2,-2,...
class OrbitBall {
 public:
  int d() const { return d_; }
  int max_length() const { return L_; }
  std::size_t size() const { return parent_.size(); }
  bool partial() const { return partial_; }
  const GeneratorSet& generators() const { return gens_; }

  int length(std::size_t i) const { return length_[i]; }
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  int last_letter(std::size_t i) const { return letter_[i]; }
  Word word(std::size_t i) const;
  std::string word_string(std::size_t i) const { return gens_.word_string(word(i)); }

  // [begin, end) of the elements with the given word length.
  std::size_t length_begin(int n) const;
  std::size_t length_end(int n) const;

  Eigen::Map<const Mat> matrix(std::size_t i) const { return wedge(i, 1); }
  // Exterior power j of element i, 1 <= j <= d-1.
  Eigen::Map<const Mat> wedge(std::size_t i, int j) const;
  const double* mu(std::size_t i) const { return &mu_[i * d_]; }
  CartanVector mu_vector(std::size_t i) const;
  CartanVector mu_theta(std::size_t i, const ThetaSet& theta) const;
  GroupElement element(std::size_t i) const;
  // log of the condition number, mu_1 - mu_d.
  double log_condition(std::size_t i) const { return mu_[i * d_] - mu_[i * d_ + d_ - 1]; }

 private:
  friend OrbitBall enumerate_ball(const GeneratorSet&, int, const EnumerationOptions&);
  int d_ = 0;
  int L_ = 0;
  bool partial_ = false;
  GeneratorSet gens_;
  std::vector<int> wedge_offset_;  // offset of wedge j inside an element record
  std::vector<int> wedge_dim_;
  int record_ = 0;
  std::vector<double> data_;
  std::vector<double> mu_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::int16_t> letter_;
  std::vector<std::uint8_t> length_;
  std::vector<std::size_t> level_start_;
};

class PartialBallError : public Error {
 public:
  PartialBallError(const std::string& what, std::shared_ptr<const OrbitBall> ball)
      : Error(ErrorKind::partial_ball, what), partial(std::move(ball)) {}
  std::shared_ptr<const OrbitBall> partial;
};

OrbitBall enumerate_ball(const GeneratorSet& gens, int L, const EnumerationOptions& opts = {});

struct RegularityReport {
  std::vector<int> lengths;
  std::vector<double> minima;
  double slope = 0;
  double intercept = 0;
  double tail_slope = 0;
  bool non_regular = false;
};

RegularityReport regularity_report(const OrbitBall& ball, const ThetaSet& theta);

// Runs fn(i) for i in [0, n) on worker threads; fn must only write to slot i.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& chunk);

}  // namespace pslab
