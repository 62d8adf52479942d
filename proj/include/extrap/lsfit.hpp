#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "extrap/bases.hpp"
#include "extrap/datagen.hpp"

namespace extrap {

struct LsSolution {
  Eigen::VectorXd coefficients;
  double residual_norm = 0.0;  // Euclidean residual on the samples
  int rank = 0;                // numerical rank of the design matrix
};

inline Eigen::MatrixXd design_matrix(const BasisFamily& family,
                                     const std::vector<Point>& points) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), family.dimension());
  for (std::size_t i = 0; i < points.size(); ++i)
    a.row(static_cast<Eigen::Index>(i)) = family.eval_all(points[i]).transpose();
  return a;
}

/// Least-squares coefficients for the samples, through a rank-revealing
/// orthogonal factorization rather than normal equations. Rank-deficient
/// systems get the minimum-norm solution; the rank is reported in the
/// solution. ridge > 0 adds Tikhonov damping via the augmented system.
inline LsSolution fit_ls(const SampleSet& samples, const BasisFamily& family,
                         double ridge = 0.0) {
  if (!samples.points || samples.points->empty())
    throw std::invalid_argument("fit_ls: need at least one sample");
  if (samples.values.size() != static_cast<Eigen::Index>(samples.points->size()))
    throw std::invalid_argument("fit_ls: point/value length mismatch");
  Eigen::MatrixXd a = design_matrix(family, *samples.points);
  if (!a.allFinite()) throw std::invalid_argument("fit_ls: non-finite design matrix");
  int d = family.dimension();
  LsSolution sol;
  if (ridge > 0.0) {
    Eigen::MatrixXd aug(a.rows() + d, d);
    aug.topRows(a.rows()) = a;
    aug.bottomRows(d) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows() + d);
    rhs.head(a.rows()) = samples.values;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(aug);
    sol.coefficients = cod.solve(rhs);
    sol.rank = static_cast<int>(cod.rank());
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    sol.coefficients = cod.solve(samples.values);
    sol.rank = static_cast<int>(cod.rank());
  }
  sol.residual_norm = (a * sol.coefficients - samples.values).norm();
  return sol;
}

/// Evaluates the fitted expansion at the given points.
inline Eigen::VectorXd extrapolate_ls(const LsSolution& sol, const BasisFamily& family,
                                      const std::vector<Point>& eval_points) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(eval_points.size()));
  for (std::size_t i = 0; i < eval_points.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = family.eval_function(sol.coefficients, eval_points[i]);
  return out;
}

}  // namespace extrap
