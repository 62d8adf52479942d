#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "extrap/bases.hpp"
#include "extrap/domains.hpp"
#include "extrap/rng.hpp"

namespace extrap {

/// Sample values of one function on a fixed point set of the data domain.
struct SampleSet {
  std::shared_ptr<const std::vector<Point>> points;
  Eigen::VectorXd values;
  double snr_db = std::numeric_limits<double>::infinity();  // noise metadata

  int size() const { return static_cast<int>(values.size()); }
};

enum class NormMode { coeff, function_omega };

/// Hyperparameters of the synthetic function sampler: coefficient-norm
/// calibration (r_m, r_sigma), the active index band [n_low, n_high]
/// (0-based, inclusive), batch size, noise level and the monotone switch.
struct GenConfig {
  double r_m = 1.0;
  double r_sigma = 0.25;
  int n_low = 0;
  int n_high = 0;
  int n_batch = 1;
  double snr_db = std::numeric_limits<double>::infinity();
  bool monotone = false;
  NormMode norm = NormMode::coeff;

  void validate(int d) const {
    if (n_low < 0 || n_low > n_high) throw std::invalid_argument("gen config: bad index band");
    if (n_high > d) throw std::invalid_argument("gen config: n_high exceeds dimension");
    if (n_batch < 1) throw std::invalid_argument("gen config: need batch size >= 1");
    if (!(r_m > 0.0)) throw std::invalid_argument("gen config: need r_m > 0");
    if (r_sigma < 0.0) throw std::invalid_argument("gen config: need r_sigma >= 0");
  }
};

/// Standard-normal coefficients on the active band, zero elsewhere.
inline Eigen::VectorXd sample_coefficients(const GenConfig& cfg, int d, Rng& rng) {
  cfg.validate(d);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  for (int i = cfg.n_low; i <= cfg.n_high && i < d; ++i) c[i] = rng.normal();
  return c;
}

/// Rescales c so its Euclidean norm equals alpha.
inline Eigen::VectorXd normalize_coefficients(const Eigen::VectorXd& c, double alpha) {
  double nrm = c.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("normalize_coefficients: zero vector");
  if (!(alpha > 0.0)) throw std::invalid_argument("normalize_coefficients: need alpha > 0");
  return c * (alpha / nrm);
}

/// Rescales c so the function norm sqrt(c^T G c) equals alpha.
inline Eigen::VectorXd normalize_coefficients_gram(const Eigen::VectorXd& c, double alpha,
                                                   const GramMatrix& gram) {
  double nrm = std::sqrt(std::max(0.0, c.dot(gram * c)));
  if (!(nrm > 0.0)) throw std::invalid_argument("normalize_coefficients: zero function norm");
  if (!(alpha > 0.0)) throw std::invalid_argument("normalize_coefficients: need alpha > 0");
  return c * (alpha / nrm);
}

namespace detail {

/// Minimum of a Chebyshev series over the domain: scan a 1000-point grid,
/// then sharpen each bracketed local minimum by golden-section search.
inline double chebyshev_series_min(const std::vector<double>& coeffs, const Domain& dom) {
  std::vector<Point> grid = grid_points(dom, 1000);
  std::size_t n = grid.size();
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = chebyshev_series(coeffs, grid[i].u);
  double best = vals[0];
  for (double v : vals) best = std::min(best, v);
  constexpr double kInvPhi = 0.6180339887498949;
  auto sharpen = [&](double lo, double hi) {
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = chebyshev_series(coeffs, x1), f2 = chebyshev_series(coeffs, x2);
    for (int it = 0; it < 120 && b - a > 1e-14; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = chebyshev_series(coeffs, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = chebyshev_series(coeffs, x2);
      }
    }
    best = std::min(best, std::min(f1, f2));
  };
  for (std::size_t i = 0; i < n; ++i) {
    bool left_ok = (i == 0) || vals[i] <= vals[i - 1];
    bool right_ok = (i + 1 == n) || vals[i] <= vals[i + 1];
    if (left_ok && right_ok)
      sharpen(grid[i > 0 ? i - 1 : 0].u, grid[i + 1 < n ? i + 1 : n - 1].u);
  }
  return best;
}

}  // namespace detail

/// The derivative-shift-and-integrate construction: shifts the constant
/// coefficient of p = sum c_k T_k so that its minimum over the domain is 0,
/// then returns the Chebyshev coefficients of the antiderivative
/// (integration constant 0). The result is nondecreasing over `dom`.
/// Requires the top coefficient slot to be free for the degree raise.
inline Eigen::VectorXd project_monotone(const Eigen::VectorXd& c, const BasisFamily& family,
                                        const Domain& dom) {
  if (family.kind() != BasisKind::chebyshev)
    throw std::invalid_argument("project_monotone: family must be Chebyshev");
  int d = family.dimension();
  if (c.size() != d) throw std::invalid_argument("project_monotone: dimension mismatch");
  if (d < 2 || c[d - 1] != 0.0)
    throw std::invalid_argument("project_monotone: no room for the degree raise");
  std::vector<double> a(c.data(), c.data() + d - 1);
  a[0] -= detail::chebyshev_series_min(a, dom);
  std::vector<double> b = chebyshev_antiderivative(a);  // size d
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) out[i] = b[static_cast<std::size_t>(i)];
  return out;
}

/// Adds Gaussian noise rescaled so that the realized signal-to-noise ratio
/// 10 log10(P_s / P_n) equals snr_db exactly, with P_s and P_n the squared
/// Euclidean norms of signal and noise. An infinite snr_db is the no-noise
/// mode and returns the values unchanged.
inline Eigen::VectorXd add_noise(const Eigen::VectorXd& values, double snr_db, Rng& rng) {
  if (std::isinf(snr_db) && snr_db > 0.0) return values;
  double p_signal = values.squaredNorm();
  if (!(p_signal > 0.0)) throw std::invalid_argument("add_noise: zero signal");
  Eigen::VectorXd noise(values.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.normal();
  double p_noise = noise.squaredNorm();
  if (!(p_noise > 0.0)) throw std::runtime_error("add_noise: degenerate noise draw");
  double target = p_signal * std::pow(10.0, -snr_db / 10.0);
  return values + noise * std::sqrt(target / p_noise);
}

/// One pair of Algorithm-style training data: sampled coefficients with the
/// matching (possibly noisy) sample values.
using TrainingPair = std::pair<SampleSet, Eigen::VectorXd>;

/// Generates cfg.n_batch training pairs. Pair j draws from the substream
/// (seed, pair_offset + j), so batches are reproducible and independent of
/// the generation order. The monotone projection needs the domain to shift
/// over (typically the union of the data and extrapolation domains); the
/// Gram matrix is needed only for NormMode::function_omega.
inline std::vector<TrainingPair> make_batch(
    const GenConfig& cfg, const BasisFamily& family,
    const std::shared_ptr<const std::vector<Point>>& sample_points, std::uint64_t seed,
    std::uint64_t pair_offset = 0, const Domain* monotone_dom = nullptr,
    const GramMatrix* gram_omega = nullptr) {
  int d = family.dimension();
  cfg.validate(d);
  if (!sample_points || sample_points->empty())
    throw std::invalid_argument("make_batch: empty sample point set");
  if (cfg.monotone && monotone_dom == nullptr)
    throw std::invalid_argument("make_batch: monotone projection needs a domain");
  if (cfg.norm == NormMode::function_omega && gram_omega == nullptr)
    throw std::invalid_argument("make_batch: function-norm mode needs the Gram matrix");
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(sample_points->size()), d);
  for (std::size_t i = 0; i < sample_points->size(); ++i)
    phi.row(static_cast<Eigen::Index>(i)) = family.eval_all((*sample_points)[i]).transpose();
  std::vector<TrainingPair> batch;
  batch.reserve(static_cast<std::size_t>(cfg.n_batch));
  for (int j = 0; j < cfg.n_batch; ++j) {
    Rng rng = Rng::stream(seed, pair_offset + static_cast<std::uint64_t>(j));
    Eigen::VectorXd c = sample_coefficients(cfg, d, rng);
    double alpha = std::abs(rng.normal(cfg.r_m, cfg.r_sigma));
    c = cfg.norm == NormMode::coeff ? normalize_coefficients(c, alpha)
                                    : normalize_coefficients_gram(c, alpha, *gram_omega);
    if (cfg.monotone) c = project_monotone(c, family, *monotone_dom);
    Eigen::VectorXd y = add_noise(phi * c, cfg.snr_db, rng);
    batch.push_back({SampleSet{sample_points, std::move(y), cfg.snr_db}, std::move(c)});
  }
  return batch;
}

}  // namespace extrap
