#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "extrap/bases.hpp"
#include "extrap/domains.hpp"
#include "extrap/rng.hpp"

namespace extrap {

/// The hardness measure kappa = d * M_xi / m_omega, where M_xi is the
/// largest squared member norm over the extrapolation domain and m_omega
/// the smallest squared member norm over the data domain.
struct ConditionReport {
  double kappa = 0.0;
  double max_norm2_xi = 0.0;    // M_xi
  double min_norm2_omega = 0.0; // m_omega
  int dimension = 0;
  Eigen::VectorXd norms2_omega;
  Eigen::VectorXd norms2_xi;
};

inline ConditionReport condition_number(const BasisFamily& family, const Domain& omega,
                                        const Domain& xi) {
  ConditionReport rep;
  rep.dimension = family.dimension();
  rep.norms2_omega = gram_matrix(omega, family).diagonal();
  rep.norms2_xi = gram_matrix(xi, family).diagonal();
  rep.min_norm2_omega = rep.norms2_omega.minCoeff();
  rep.max_norm2_xi = rep.norms2_xi.maxCoeff();
  if (!(rep.min_norm2_omega > 0.0))
    throw std::runtime_error("condition_number: zero-norm basis member on the data domain");
  rep.kappa = rep.dimension * rep.max_norm2_xi / rep.min_norm2_omega;
  return rep;
}

/// The coefficient-space error quadratic delta^T G delta, i.e. the squared
/// domain norm of sum_k delta_k phi_k expanded into cross terms and squared
/// member norms.
inline double error_quadratic(const Eigen::VectorXd& delta, const GramMatrix& gram) {
  if (delta.size() != gram.rows() || gram.rows() != gram.cols())
    throw std::invalid_argument("error_quadratic: dimension mismatch");
  return delta.dot(gram * delta);
}

/// ||a||_1^2 / ||a||_2^2 for a vector of positive numbers; at most len(a),
/// with equality exactly on constant vectors.
inline double lemma1_ratio(const Eigen::VectorXd& a) {
  if (a.size() == 0) throw std::invalid_argument("lemma1_ratio: empty vector");
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!(a[i] > 0.0)) throw std::invalid_argument("lemma1_ratio: nonpositive entry");
  double l1 = a.lpNorm<1>();
  return l1 * l1 / a.squaredNorm();
}

struct Theorem1Report {
  double kappa = 0.0;
  int trials = 0;
  bool orthogonal_xi = false;   // family also orthogonal on xi
  double max_ratio = 0.0;       // max over trials of E_xi / E_omega
  int violations = 0;           // trials where the applicable bound failed
};

inline bool gram_is_diagonal(const GramMatrix& g, double rel_tol = 1e-8) {
  double scale = g.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      if (i != j && std::abs(g(i, j)) > rel_tol * scale) return false;
  return true;
}

/// Draws random coefficient pairs and checks the error bound
/// E_xi <= kappa * E_omega (plus E_xi <= (kappa/d) * E_omega when the family
/// is orthogonal on xi as well). Requires orthogonality on omega.
inline Theorem1Report verify_theorem1(const BasisFamily& family, const Domain& omega,
                                      const Domain& xi, int trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("verify_theorem1: need trials >= 1");
  GramMatrix g_omega = gram_matrix(omega, family);
  if (!gram_is_diagonal(g_omega))
    throw std::invalid_argument("verify_theorem1: family is not orthogonal on omega");
  GramMatrix g_xi = gram_matrix(xi, family);
  Theorem1Report rep;
  rep.trials = trials;
  rep.orthogonal_xi = gram_is_diagonal(g_xi);
  rep.kappa = condition_number(family, omega, xi).kappa;
  int d = family.dimension();
  double bound_factor = rep.orthogonal_xi ? rep.kappa / d : rep.kappa;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd delta(d);
    for (int i = 0; i < d; ++i) delta[i] = rng.normal();
    double e_omega = error_quadratic(delta, g_omega);
    double e_xi = error_quadratic(delta, g_xi);
    if (e_omega <= 0.0) continue;  // g equals its prediction; bound is vacuous
    rep.max_ratio = std::max(rep.max_ratio, e_xi / e_omega);
    if (e_xi > bound_factor * e_omega + 1e-9 * e_omega) rep.violations++;
  }
  return rep;
}

/// Best L2(dom) approximation of f inside the family, plus the residual.
struct ProjectionSplit {
  Eigen::VectorXd coefficients;  // f_parallel in the family
  double residual_norm = 0.0;    // ||f - f_parallel|| over the domain
};

inline ProjectionSplit projection_split(const FunctionHandle& f, const BasisFamily& family,
                                        const Domain& dom) {
  GramMatrix g = gram_matrix(dom, family);
  if (!numerically_full_rank(g))
    throw std::runtime_error("projection_split: singular Gram matrix");
  int d = family.dimension();
  Eigen::VectorXd b(d);
  for (int k = 0; k < d; ++k) b[k] = inner_product(dom, f, family.member(k + 1));
  ProjectionSplit split;
  split.coefficients = g.ldlt().solve(b);
  split.residual_norm = std::sqrt(std::max(0.0, norm_squared(dom, [&](const Point& p) {
                          return f(p) - family.eval_function(split.coefficients, p);
                        })));
  return split;
}

/// ||f - sum_k c_k phi_k|| over the domain.
inline double residual_norm(const FunctionHandle& f, const BasisFamily& family,
                            const Eigen::VectorXd& c, const Domain& dom) {
  return std::sqrt(std::max(0.0, norm_squared(dom, [&](const Point& p) {
                     return f(p) - family.eval_function(c, p);
                   })));
}

}  // namespace extrap
