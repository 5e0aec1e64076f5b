#include "pslab/orbit.hpp"

#include <cmath>
#include <thread>
#include <unordered_map>

#include "pslab/precise.hpp"
#include "pslab/wedge.hpp"

namespace pslab {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& chunk) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads == 1 || n < 1024) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t step = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t b = t * step, e = std::min(n, b + step);
    if (b >= e) break;
    pool.emplace_back(chunk, b, e);
  }
  for (auto& th : pool) th.join();
}

// ---- GeneratorSet

GeneratorSet::GeneratorSet(std::vector<GroupElement> gens, std::vector<std::string> labels)
    : gens_(std::move(gens)), labels_(std::move(labels)) {
  if (gens_.empty()) throw Error(ErrorKind::precondition, "generator set is empty");
  d_ = gens_[0].dim();
  for (std::size_t k = 0; k < gens_.size(); ++k) {
    const Mat& m = gens_[k].matrix();
    if (m.rows() != d_) throw Error(ErrorKind::signature, "generators of different size");
    if ((m - Mat::Identity(d_, d_)).cwiseAbs().maxCoeff() < 1e-12)
      throw Error(ErrorKind::precondition, "generator equals the identity");
    inv_.push_back(m.inverse());
  }
  if (gens_.size() > 127) throw Error(ErrorKind::precondition, "too many generators");
  while (labels_.size() < gens_.size()) {
    std::size_t k = labels_.size();
    labels_.push_back(k < 26 ? std::string(1, char('a' + k)) : "g" + std::to_string(k));
  }
  for (std::size_t k = 0; k < gens_.size(); ++k) {
    for (int sgn = 0; sgn < 2; ++sgn) {
      const Mat& m = sgn == 0 ? gens_[k].matrix() : inv_[k];
      std::vector<Mat> w;
      for (int j = 1; j < d_; ++j) w.push_back(exterior_power(m, j));
      wedges_.push_back(std::move(w));
    }
  }
}

std::vector<int> GeneratorSet::letters() const {
  std::vector<int> out;
  for (int k = 1; k <= rank(); ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

const Mat& GeneratorSet::letter_matrix(int letter) const {
  int k = std::abs(letter) - 1;
  return letter > 0 ? gens_.at(k).matrix() : inv_.at(k);
}

const Mat& GeneratorSet::letter_wedge(int letter, int j) const {
  int k = std::abs(letter) - 1;
  return wedges_.at(2 * k + (letter > 0 ? 0 : 1)).at(j - 1);
}

GroupElement GeneratorSet::evaluate(const Word& w) const {
  if (static_cast<int>(w.size()) > long_word_cutoff) {
    std::vector<QMat> g, gi;
    for (int k = 0; k < rank(); ++k) {
      g.push_back(to_quad(gens_[k].matrix()));
      gi.push_back(to_quad(inv_[k]));
    }
    return GroupElement::trusted(to_double(quad_word_product(g, gi, w)), w);
  }
  Mat p = Mat::Identity(d_, d_);
  for (int x : w) p = p * letter_matrix(x);
  return GroupElement::trusted(p, w);
}

// ---- OrbitBall

Word OrbitBall::word(std::size_t i) const {
  Word w(length_[i]);
  for (int k = length_[i] - 1; k >= 0; --k) {
    w[k] = letter_[i];
    i = parent_[i];
  }
  return w;
}

std::size_t OrbitBall::length_begin(int n) const {
  if (n < 0) return 0;
  if (n >= static_cast<int>(level_start_.size())) return size();
  return level_start_[n];
}

std::size_t OrbitBall::length_end(int n) const { return length_begin(n + 1); }

Eigen::Map<const Mat> OrbitBall::wedge(std::size_t i, int j) const {
  int n = wedge_dim_[j - 1];
  return Eigen::Map<const Mat>(&data_[i * record_ + wedge_offset_[j - 1]], n, n);
}

CartanVector OrbitBall::mu_vector(std::size_t i) const {
  return CartanVector::centered(Eigen::Map<const Vec>(mu(i), d_));
}

CartanVector OrbitBall::mu_theta(std::size_t i, const ThetaSet& theta) const {
  return p_theta(mu_vector(i), theta);
}

GroupElement OrbitBall::element(std::size_t i) const {
  return GroupElement::trusted(Mat(matrix(i)), word(i));
}

namespace {

struct QuantKey {
  std::vector<long long> q;
  std::uint64_t hash = 0;
};

QuantKey quantize(const double* m, int n, double tol) {
  double mx = 1.0;
  for (int k = 0; k < n; ++k) mx = std::max(mx, std::abs(m[k]));
  double step = tol * std::exp2(std::ceil(std::log2(mx)));
  QuantKey key;
  key.q.resize(n);
  std::uint64_t h = 1469598103934665603ull;
  for (int k = 0; k < n; ++k) {
    key.q[k] = std::llround(m[k] / step);
    h ^= static_cast<std::uint64_t>(key.q[k]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  key.hash = h;
  return key;
}

void compute_mu(const double* rec, const std::vector<int>& off, const std::vector<int>& dim, int d, double* mu) {
  double prev = 0;
  for (int j = 1; j < d; ++j) {
    double s = std::log(top_singular_value(rec + off[j - 1], dim[j - 1]));
    mu[j - 1] = s - prev;
    prev = s;
  }
  mu[d - 1] = -prev;
}

}  // namespace

OrbitBall enumerate_ball(const GeneratorSet& gens, int L, const EnumerationOptions& opts) {
  if (L < 0) throw Error(ErrorKind::precondition, "word length must be >= 0");
  if (L > 255) throw Error(ErrorKind::precondition, "word length too large");
  OrbitBall ball;
  int d = gens.d();
  ball.d_ = d;
  ball.L_ = L;
  ball.gens_ = gens;
  ball.record_ = 0;
  for (int j = 1; j < d; ++j) {
    int n = binomial(d, j);
    ball.wedge_offset_.push_back(ball.record_);
    ball.wedge_dim_.push_back(n);
    ball.record_ += n * n;
  }
  const int rec = ball.record_;
  const int dd = d * d;

  // identity
  ball.data_.assign(rec, 0.0);
  for (int j = 1; j < d; ++j) {
    int n = ball.wedge_dim_[j - 1];
    for (int a = 0; a < n; ++a) ball.data_[ball.wedge_offset_[j - 1] + a * n + a] = 1.0;
  }
  ball.mu_.assign(d, 0.0);
  ball.parent_.push_back(0xffffffffu);
  ball.letter_.push_back(0);
  ball.length_.push_back(0);
  ball.level_start_.push_back(0);

  std::unordered_multimap<std::uint64_t, std::uint32_t> seen;
  seen.emplace(quantize(ball.data_.data(), dd, opts.dedup_tol).hash, 0);

  const std::vector<int> letters = gens.letters();
  for (int n = 1; n <= L; ++n) {
    std::size_t pb = ball.level_start_[n - 1], pe = ball.size();
    std::vector<std::size_t> cand_parent;
    std::vector<int> cand_letter;
    for (std::size_t p = pb; p < pe; ++p)
      for (int x : letters) {
        if (n > 1 && x == -ball.letter_[p]) continue;
        cand_parent.push_back(p);
        cand_letter.push_back(x);
      }
    std::size_t nc = cand_parent.size();
    std::vector<double> cdata(nc * rec), cmu(nc * d);
    parallel_for(nc, opts.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        const double* prec = &ball.data_[cand_parent[c] * rec];
        double* out = &cdata[c * rec];
        for (int j = 1; j < d; ++j) {
          int m = ball.wedge_dim_[j - 1];
          Eigen::Map<const Mat> P(prec + ball.wedge_offset_[j - 1], m, m);
          Eigen::Map<Mat> O(out + ball.wedge_offset_[j - 1], m, m);
          O.noalias() = P * gens.letter_wedge(cand_letter[c], j);
        }
        compute_mu(out, ball.wedge_offset_, ball.wedge_dim_, d, &cmu[c * d]);
      }
    });
    ball.level_start_.push_back(ball.size());
    for (std::size_t c = 0; c < nc; ++c) {
      const double* m = &cdata[c * rec];
      QuantKey key = quantize(m, dd, opts.dedup_tol);
      bool dup = false;
      auto range = seen.equal_range(key.hash);
      for (auto it = range.first; it != range.second && !dup; ++it) {
        QuantKey other = quantize(&ball.data_[std::size_t(it->second) * rec], dd, opts.dedup_tol);
        dup = other.q == key.q;
      }
      if (dup) continue;
      if (ball.size() >= opts.max_elements) {
        ball.partial_ = true;
        auto copy = std::make_shared<OrbitBall>(ball);
        throw PartialBallError("memory budget exceeded at word length " + std::to_string(n) + " after " +
                                   std::to_string(ball.size()) + " elements",
                               copy);
      }
      std::uint32_t idx = static_cast<std::uint32_t>(ball.size());
      seen.emplace(key.hash, idx);
      ball.data_.insert(ball.data_.end(), m, m + rec);
      ball.mu_.insert(ball.mu_.end(), &cmu[c * d], &cmu[c * d] + d);
      ball.parent_.push_back(static_cast<std::uint32_t>(cand_parent[c]));
      ball.letter_.push_back(static_cast<std::int16_t>(cand_letter[c]));
      ball.length_.push_back(static_cast<std::uint8_t>(n));
    }
  }
  return ball;
}

RegularityReport regularity_report(const OrbitBall& ball, const ThetaSet& theta) {
  RegularityReport rep;
  if (theta.d() != ball.d()) throw Error(ErrorKind::signature, "regularity_report: theta for wrong d");
  if (ball.size() <= 1) return rep;
  if (ball.max_length() < 4)
    throw Error(ErrorKind::insufficient_data, "regularity report needs word length L >= 4");
  for (int n = 1; n <= ball.max_length(); ++n) {
    std::size_t b = ball.length_begin(n), e = ball.length_end(n);
    if (b == e) continue;
    double m = INFINITY;
    for (std::size_t i = b; i < e; ++i) {
      const double* mu = ball.mu(i);
      for (int a : theta.indices()) m = std::min(m, mu[a - 1] - mu[a]);
    }
    rep.lengths.push_back(n);
    rep.minima.push_back(m);
  }
  auto fit = [](const std::vector<int>& x, const std::vector<double>& y, std::size_t from, double* slope,
                double* icept) {
    std::size_t n = x.size() - from;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = from; k < x.size(); ++k) {
      sx += x[k];
      sy += y[k];
      sxx += double(x[k]) * x[k];
      sxy += x[k] * y[k];
    }
    double den = n * sxx - sx * sx;
    *slope = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
    *icept = (sy - *slope * sx) / n;
  };
  fit(rep.lengths, rep.minima, 0, &rep.slope, &rep.intercept);
  std::size_t n = rep.lengths.size();
  std::size_t from = n - std::max<std::size_t>(2, (n + 2) / 3);
  double ic;
  fit(rep.lengths, rep.minima, from, &rep.tail_slope, &ic);
  rep.non_regular = !(rep.tail_slope > 1e-6);
  return rep;
}

}  // namespace pslab
