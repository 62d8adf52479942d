#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extrap/functions.hpp"
#include "extrap/point.hpp"

namespace extrap {

enum class BasisKind {
  chebyshev,
  trigonometric,
  spherical_harmonic,
  anchor_frame,
  custom,  // explicit member list without anchor semantics
  mixed,   // linear combinations of a base family
};

inline const char* basis_kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::chebyshev: return "chebyshev";
    case BasisKind::trigonometric: return "trigonometric";
    case BasisKind::spherical_harmonic: return "spherical-harmonic";
    case BasisKind::anchor_frame: return "anchor-frame";
    case BasisKind::custom: return "custom";
    case BasisKind::mixed: return "mixed";
  }
  return "?";
}

/// An ordered family {phi_1, ..., phi_d} of evaluable functions spanning the
/// prior space. Member indices are 1-based in eval_basis/member; coefficient
/// vectors are 0-based with entry i attached to member i+1.
///
/// Orderings:
///   chebyshev           T_0, T_1, ..., T_{d-1}
///   trigonometric       [1,] sin x, cos x, sin 2x, cos 2x, ...
///   spherical-harmonic  (0,0), (1,1), (1,0), (1,-1), (2,2), ...
///   anchor-frame        anchors first, fillers after, in the given order
class BasisFamily {
 public:
  static BasisFamily chebyshev(int d) {
    if (d < 1) throw std::invalid_argument("chebyshev family: need d >= 1");
    BasisFamily f(BasisKind::chebyshev, d);
    return f;
  }

  static BasisFamily trigonometric(int d, bool include_constant = true) {
    if (d < 1) throw std::invalid_argument("trigonometric family: need d >= 1");
    BasisFamily f(BasisKind::trigonometric, d);
    f.trig_constant_ = include_constant;
    return f;
  }

  static BasisFamily spherical_harmonics(int l_max) {
    if (l_max < 0) throw std::invalid_argument("spherical family: need l_max >= 0");
    BasisFamily f(BasisKind::spherical_harmonic, (l_max + 1) * (l_max + 1));
    f.l_max_ = l_max;
    return f;
  }

  static BasisFamily anchor_frame(std::vector<FunctionHandle> anchors,
                                  std::vector<FunctionHandle> fillers) {
    if (anchors.empty()) throw std::invalid_argument("anchor frame: empty anchor list");
    BasisFamily f(BasisKind::anchor_frame,
                  static_cast<int>(anchors.size() + fillers.size()));
    f.n_anchors_ = static_cast<int>(anchors.size());
    f.members_ = std::move(anchors);
    f.members_.insert(f.members_.end(), fillers.begin(), fillers.end());
    return f;
  }

  static BasisFamily from_handles(std::vector<FunctionHandle> members) {
    if (members.empty()) throw std::invalid_argument("family: empty member list");
    BasisFamily f(BasisKind::custom, static_cast<int>(members.size()));
    f.members_ = std::move(members);
    return f;
  }

  /// Family of linear combinations of `base`: member i = sum_j mixing(i,j) phi_j.
  static BasisFamily mixed(BasisFamily base, Eigen::MatrixXd mixing) {
    if (mixing.cols() != base.dimension())
      throw std::invalid_argument("mixed family: mixing shape mismatch");
    BasisFamily f(BasisKind::mixed, static_cast<int>(mixing.rows()));
    f.base_ = std::make_shared<const BasisFamily>(std::move(base));
    f.mixing_ = std::move(mixing);
    return f;
  }

  BasisKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  int l_max() const { return l_max_; }
  bool trig_includes_constant() const { return trig_constant_; }
  int anchor_count() const { return n_anchors_; }
  const BasisFamily& base() const {
    if (!base_) throw std::logic_error("BasisFamily: not a mixed family");
    return *base_;
  }
  const Eigen::MatrixXd& mixing() const {
    if (kind_ != BasisKind::mixed) throw std::logic_error("BasisFamily: not a mixed family");
    return mixing_;
  }
  bool spherical_domain() const {
    if (kind_ == BasisKind::spherical_harmonic) return true;
    if (kind_ == BasisKind::mixed) return base_->spherical_domain();
    if (!members_.empty()) return members_.front().spherical_domain();
    return false;
  }

  /// phi_k(p), 1-based k.
  double eval(int k, const Point& p) const {
    check_index(k);
    switch (kind_) {
      case BasisKind::chebyshev:
        require_interval(p);
        return chebyshev_t(k - 1, p.u);
      case BasisKind::trigonometric:
        require_interval(p);
        return trig_value(k, p.u);
      case BasisKind::spherical_harmonic: {
        if (!p.on_sphere)
          throw std::invalid_argument("spherical family fed an interval point");
        auto [l, m] = sph_lm(k - 1);
        return real_sph_harm(l, m, p.u, p.v);
      }
      case BasisKind::anchor_frame:
      case BasisKind::custom:
        return members_[static_cast<std::size_t>(k - 1)](p);
      case BasisKind::mixed: {
        Eigen::VectorXd base_vals = base_->eval_all(p);
        return mixing_.row(k - 1).dot(base_vals);
      }
    }
    throw std::logic_error("BasisFamily: bad kind");
  }

  /// All members at p as a column vector.
  Eigen::VectorXd eval_all(const Point& p) const {
    Eigen::VectorXd out(dim_);
    switch (kind_) {
      case BasisKind::chebyshev: {
        require_interval(p);
        out[0] = 1.0;
        if (dim_ > 1) out[1] = p.u;
        for (int k = 2; k < dim_; ++k) out[k] = 2.0 * p.u * out[k - 1] - out[k - 2];
        return out;
      }
      case BasisKind::trigonometric: {
        require_interval(p);
        for (int k = 1; k <= dim_; ++k) out[k - 1] = trig_value(k, p.u);
        return out;
      }
      case BasisKind::spherical_harmonic: {
        if (!p.on_sphere)
          throw std::invalid_argument("spherical family fed an interval point");
        std::vector<double> vals;
        real_sph_harm_all(l_max_, p.u, p.v, vals);
        for (int k = 0; k < dim_; ++k) out[k] = vals[static_cast<std::size_t>(k)];
        return out;
      }
      case BasisKind::anchor_frame:
      case BasisKind::custom: {
        for (int k = 0; k < dim_; ++k) out[k] = members_[static_cast<std::size_t>(k)](p);
        return out;
      }
      case BasisKind::mixed:
        return mixing_ * base_->eval_all(p);
    }
    throw std::logic_error("BasisFamily: bad kind");
  }

  /// sum_k c_k phi_{k+1}(p).
  double eval_function(const Eigen::VectorXd& c, const Point& p) const {
    if (c.size() != dim_)
      throw std::invalid_argument("eval_function: coefficient dimension mismatch");
    return c.dot(eval_all(p));
  }

  /// Member k as a standalone handle, 1-based.
  FunctionHandle member(int k) const {
    check_index(k);
    switch (kind_) {
      case BasisKind::chebyshev:
        return FunctionHandle::chebyshev(k - 1);
      case BasisKind::trigonometric: {
        int kk = trig_constant_ ? k : k + 1;
        if (kk == 1) return FunctionHandle::constant(1.0);
        int freq = kk / 2;
        return (kk % 2 == 0) ? FunctionHandle::sine(freq) : FunctionHandle::cosine(freq);
      }
      case BasisKind::spherical_harmonic: {
        auto [l, m] = sph_lm(k - 1);
        return FunctionHandle::spherical(l, m);
      }
      case BasisKind::anchor_frame:
      case BasisKind::custom:
        return members_[static_cast<std::size_t>(k - 1)];
      case BasisKind::mixed: {
        FunctionHandle::Terms terms;
        for (int j = 0; j < base_->dimension(); ++j)
          terms.emplace_back(mixing_(k - 1, j), base_->member(j + 1));
        return FunctionHandle::combination(std::move(terms));
      }
    }
    throw std::logic_error("BasisFamily: bad kind");
  }

 private:
  BasisFamily(BasisKind kind, int dim) : kind_(kind), dim_(dim) {}

  void check_index(int k) const {
    if (k < 1 || k > dim_) throw std::out_of_range("basis index out of range");
  }
  void require_interval(const Point& p) const {
    if (p.on_sphere) throw std::invalid_argument("interval family fed a spherical point");
  }
  double trig_value(int k, double x) const {
    int kk = trig_constant_ ? k : k + 1;  // position in 1, sin x, cos x, sin 2x, ...
    if (kk == 1) return 1.0;
    int freq = kk / 2;
    return (kk % 2 == 0) ? std::sin(freq * x) : std::cos(freq * x);
  }
  std::pair<int, int> sph_lm(int idx0) const {
    int l = 0;
    while ((l + 1) * (l + 1) <= idx0) ++l;
    int m = l - (idx0 - l * l);
    return {l, m};
  }

  BasisKind kind_;
  int dim_;
  bool trig_constant_ = true;
  int l_max_ = 0;
  int n_anchors_ = 0;
  std::vector<FunctionHandle> members_;
  std::shared_ptr<const BasisFamily> base_;
  Eigen::MatrixXd mixing_;
};

/// Frame of anchor functions followed by filler functions (anchors first).
inline BasisFamily make_anchor_frame(std::vector<FunctionHandle> anchors,
                                     std::vector<FunctionHandle> fillers) {
  return BasisFamily::anchor_frame(std::move(anchors), std::move(fillers));
}

/// phi_k evaluated at p, 1-based k.
inline double eval_basis(const BasisFamily& family, int k, const Point& p) {
  return family.eval(k, p);
}

/// sum_k c_k phi_k at p.
inline double eval_function(const BasisFamily& family, const Eigen::VectorXd& c,
                            const Point& p) {
  return family.eval_function(c, p);
}

}  // namespace extrap
