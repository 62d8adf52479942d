#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "extrap/bases.hpp"
#include "extrap/functions.hpp"
#include "extrap/point.hpp"
#include "extrap/quadrature.hpp"

namespace extrap {

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  bool right_open = false;
};

enum class DomainKind { interval_union, spherical_band };

/// The data domain Omega or the extrapolation domain Xi: a union of
/// interval segments, or a band of the unit sphere, together with a
/// quadrature rule that induces the L2 inner product and norm.
///
/// Interval quadrature is composite Gauss-Legendre, 32 nodes per segment by
/// default. Sphere quadrature is Gauss-Legendre in cos(theta) crossed with a
/// trapezoid rule in phi (64 x 128 by default); the sin(theta) area element
/// is absorbed by the cos(theta) substitution. Quadrature sums always reduce
/// in ascending node order.
class Domain {
 public:
  static Domain interval(double a, double b, bool right_open = false,
                         int nodes_per_segment = 32) {
    return interval_union({Segment{a, b, right_open}}, nodes_per_segment);
  }

  static Domain interval_union(std::vector<Segment> segments,
                               int nodes_per_segment = 32) {
    if (segments.empty()) throw std::invalid_argument("domain: no segments");
    if (nodes_per_segment < 1) throw std::invalid_argument("domain: need nodes >= 1");
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (!(segments[i].lo < segments[i].hi))
        throw std::invalid_argument("domain: degenerate segment");
      if (i > 0 && segments[i].lo < segments[i - 1].hi)
        throw std::invalid_argument("domain: overlapping segments");
    }
    Domain d;
    d.kind_ = DomainKind::interval_union;
    d.segments_ = std::move(segments);
    d.nodes_per_segment_ = nodes_per_segment;
    for (const Segment& s : d.segments_) {
      QuadRule rule = gauss_legendre(nodes_per_segment, s.lo, s.hi);
      for (int i = 0; i < nodes_per_segment; ++i) {
        d.nodes_.push_back(Point::interval(rule.nodes[static_cast<std::size_t>(i)]));
        d.weights_.push_back(rule.weights[static_cast<std::size_t>(i)]);
      }
    }
    return d;
  }

  /// Band z in [z_lo, z_hi] of the unit sphere, full phi range.
  static Domain sphere_band_z(double z_lo, double z_hi, int n_theta = 64,
                              int n_phi = 128) {
    if (!(z_lo < z_hi) || z_lo < -1.0 || z_hi > 1.0)
      throw std::invalid_argument("domain: bad sphere band");
    if (n_theta < 1 || n_phi < 2) throw std::invalid_argument("domain: bad sphere rule");
    Domain d;
    d.kind_ = DomainKind::spherical_band;
    d.z_lo_ = z_lo;
    d.z_hi_ = z_hi;
    d.n_theta_ = n_theta;
    d.n_phi_ = n_phi;
    QuadRule tq = gauss_legendre(n_theta, z_lo, z_hi);
    QuadRule pq = trapezoid(n_phi, 0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < n_theta; ++i) {
      double theta = std::acos(std::clamp(tq.nodes[static_cast<std::size_t>(i)], -1.0, 1.0));
      for (int j = 0; j < n_phi; ++j) {
        d.nodes_.push_back(Point::sphere(theta, pq.nodes[static_cast<std::size_t>(j)]));
        d.weights_.push_back(tq.weights[static_cast<std::size_t>(i)] *
                             pq.weights[static_cast<std::size_t>(j)]);
      }
    }
    return d;
  }

  static Domain full_sphere(int n_theta = 64, int n_phi = 128) {
    return sphere_band_z(-1.0, 1.0, n_theta, n_phi);
  }

  DomainKind kind() const { return kind_; }
  bool is_interval() const { return kind_ == DomainKind::interval_union; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double z_lo() const { return z_lo_; }
  double z_hi() const { return z_hi_; }

  double measure() const {
    if (kind_ == DomainKind::interval_union) {
      double len = 0.0;
      for (const Segment& s : segments_) len += s.hi - s.lo;
      return len;
    }
    return (z_hi_ - z_lo_) * 2.0 * std::numbers::pi;
  }

  double left_end() const {
    require_interval();
    return segments_.front().lo;
  }
  double right_end() const {
    require_interval();
    return segments_.back().hi;
  }

  bool contains(const Point& p, double tol = 1e-12) const {
    if (kind_ == DomainKind::interval_union) {
      if (p.on_sphere) return false;
      for (const Segment& s : segments_)
        if (p.u >= s.lo - tol && p.u <= s.hi + tol) return true;
      return false;
    }
    if (!p.on_sphere) return false;
    double z = std::cos(p.u);
    return z >= z_lo_ - tol && z <= z_hi_ + tol;
  }

  /// Quadrature sum of f over the domain, ascending node index.
  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(nodes_[i]);
    return acc;
  }

  Domain translated(double delta) const {
    require_interval();
    std::vector<Segment> segs = segments_;
    for (Segment& s : segs) {
      s.lo += delta;
      s.hi += delta;
    }
    return interval_union(std::move(segs), nodes_per_segment_);
  }

  /// Union of two interval domains (segments must not overlap).
  static Domain unite(const Domain& a, const Domain& b) {
    a.require_interval();
    b.require_interval();
    std::vector<Segment> segs = a.segments_;
    segs.insert(segs.end(), b.segments_.begin(), b.segments_.end());
    return interval_union(std::move(segs),
                          std::max(a.nodes_per_segment_, b.nodes_per_segment_));
  }

 private:
  void require_interval() const {
    if (kind_ != DomainKind::interval_union)
      throw std::invalid_argument("domain: interval operation on a sphere domain");
  }

  DomainKind kind_ = DomainKind::interval_union;
  std::vector<Segment> segments_;
  int nodes_per_segment_ = 32;
  double z_lo_ = 0.0, z_hi_ = 0.0;
  int n_theta_ = 64, n_phi_ = 128;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
};

using GramMatrix = Eigen::MatrixXd;

/// <f, g> over the domain (unweighted L2 measure; sin(theta) dtheta dphi on
/// the sphere).
inline double inner_product(const Domain& dom, const FunctionHandle& f,
                            const FunctionHandle& g) {
  return dom.integrate([&](const Point& p) { return f(p) * g(p); });
}

template <typename F>
double norm_squared(const Domain& dom, F&& f) {
  return dom.integrate([&](const Point& p) {
    double v = f(p);
    return v * v;
  });
}

/// Matrix of pairwise member inner products over the domain, symmetrized.
inline GramMatrix gram_matrix(const Domain& dom, const BasisFamily& family) {
  int d = family.dimension();
  GramMatrix g = GramMatrix::Zero(d, d);
  const auto& nodes = dom.nodes();
  const auto& weights = dom.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Eigen::VectorXd v = family.eval_all(nodes[i]);
    g.noalias() += weights[i] * v * v.transpose();
  }
  return 0.5 * (g + g.transpose());
}

/// True when the smallest eigenvalue exceeds rel_tol times the largest.
inline bool numerically_full_rank(const GramMatrix& gram, double rel_tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  double max_ev = eig.eigenvalues().maxCoeff();
  return max_ev > 0.0 && eig.eigenvalues().minCoeff() > rel_tol * max_ev;
}

/// Modified Gram-Schmidt against the domain inner product. Returns a mixed
/// family whose Gram matrix on `dom` is the identity; its mixing() rows hold
/// the combination coefficients. Throws on numerical rank deficiency.
inline BasisFamily orthogonalize(const BasisFamily& family, const Domain& dom) {
  GramMatrix g = gram_matrix(dom, family);
  if (!numerically_full_rank(g))
    throw std::runtime_error("orthogonalize: family is linearly dependent on the domain");
  int d = family.dimension();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, i);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) {
        double proj = q.row(j) * (g * v);
        v -= proj * q.row(j).transpose();
      }
    double nrm2 = v.dot(g * v);
    if (!(nrm2 > 0.0))
      throw std::runtime_error("orthogonalize: family is linearly dependent on the domain");
    q.row(i) = v / std::sqrt(nrm2);
  }
  return BasisFamily::mixed(family, std::move(q));
}

/// Equally spaced points. Interval unions spread n points across segments
/// proportionally to length; right-open segments exclude their right end.
/// Sphere bands produce an n x n tensor grid in (theta, phi).
inline std::vector<Point> grid_points(const Domain& dom, int n_per_dim) {
  if (n_per_dim < 2) throw std::invalid_argument("grid_points: need n >= 2");
  std::vector<Point> pts;
  if (dom.kind() == DomainKind::spherical_band) {
    double theta_lo = std::acos(std::clamp(dom.z_hi(), -1.0, 1.0));
    double theta_hi = std::acos(std::clamp(dom.z_lo(), -1.0, 1.0));
    double dtheta = (theta_hi - theta_lo) / (n_per_dim - 1);
    double dphi = 2.0 * std::numbers::pi / n_per_dim;  // periodic, right end excluded
    for (int i = 0; i < n_per_dim; ++i)
      for (int j = 0; j < n_per_dim; ++j)
        pts.push_back(Point::sphere(theta_lo + dtheta * i, dphi * j));
    return pts;
  }
  const auto& segs = dom.segments();
  double total = dom.measure();
  // proportional allocation, remainders to the largest fractional parts
  std::vector<int> counts(segs.size(), 0);
  std::vector<std::pair<double, std::size_t>> frac;
  int assigned = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    double share = n_per_dim * (segs[i].hi - segs[i].lo) / total;
    counts[i] = static_cast<int>(share);
    assigned += counts[i];
    frac.emplace_back(share - counts[i], i);
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  for (int r = 0; r < n_per_dim - assigned; ++r) counts[frac[static_cast<std::size_t>(r)].second]++;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    int n = counts[i];
    if (n == 0) continue;
    if (s.right_open) {
      double step = (s.hi - s.lo) / n;
      for (int k = 0; k < n; ++k) pts.push_back(Point::interval(s.lo + step * k));
    } else if (n == 1) {
      pts.push_back(Point::interval(s.lo));
    } else {
      double step = (s.hi - s.lo) / (n - 1);
      for (int k = 0; k < n; ++k) pts.push_back(Point::interval(s.lo + step * k));
    }
  }
  return pts;
}

}  // namespace extrap
