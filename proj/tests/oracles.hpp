#pragma once

// Independent reference implementations used only by tests. These follow
// different evaluation routes than the library (symbolic differentiation
// instead of recurrences, brute-force quadrature instead of Gram algebra)
// so they can serve as oracles.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "extrap/bases.hpp"
#include "extrap/domains.hpp"

namespace oracles {

// Monomial coefficients of the Legendre polynomial P_l via the recurrence
// (l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1} carried on coefficient arrays.
inline std::vector<double> legendre_coeffs(int l) {
  std::vector<double> p0{1.0};
  if (l == 0) return p0;
  std::vector<double> p1{0.0, 1.0};
  for (int k = 1; k < l; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k) + 2, 0.0);
    for (std::size_t i = 0; i < p1.size(); ++i)
      next[i + 1] += (2.0 * k + 1.0) / (k + 1.0) * p1[i];
    for (std::size_t i = 0; i < p0.size(); ++i)
      next[i] -= static_cast<double>(k) / (k + 1.0) * p0[i];
    p0 = std::move(p1);
    p1 = std::move(next);
  }
  return p1;
}

inline std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

inline double polyval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Rodrigues route: P_l^m(t) = (-1)^m (1-t^2)^{m/2} d^m/dt^m P_l(t).
inline double assoc_legendre_rodrigues(int l, int m, double t) {
  std::vector<double> c = legendre_coeffs(l);
  for (int k = 0; k < m; ++k) c = differentiate(c);
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(1.0 - t * t, m / 2.0) * polyval(c, t);
}

// Real spherical harmonic assembled from the Rodrigues route and explicit
// factorial normalization.
inline double real_sph_harm_oracle(int l, int m, double theta, double phi) {
  int am = std::abs(m);
  double num = 1.0, den = 1.0;
  for (int i = 2; i <= l - am; ++i) num *= i;
  for (int i = 2; i <= l + am; ++i) den *= i;
  double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * num / den);
  double p = assoc_legendre_rodrigues(l, am, std::cos(theta));
  if (m > 0) return std::numbers::sqrt2 * norm * p * std::cos(am * phi);
  if (m < 0) return std::numbers::sqrt2 * norm * p * std::sin(am * phi);
  return norm * p;
}

// Brute-force squared domain norm of sum_k delta_k phi_k: quadrature of the
// pointwise square, no Gram matrix involved.
inline double brute_norm2(const extrap::Domain& dom, const extrap::BasisFamily& family,
                          const Eigen::VectorXd& delta) {
  return dom.integrate([&](const extrap::Point& p) {
    double v = 0.0;
    for (int k = 0; k < family.dimension(); ++k) v += delta[k] * family.eval(k + 1, p);
    return v * v;
  });
}

// Grid-monotonicity check: g(x_{i+1}) >= g(x_i) - slack on an n-point grid.
inline bool grid_nondecreasing(const extrap::BasisFamily& family, const Eigen::VectorXd& c,
                               const extrap::Domain& dom, int n = 1000,
                               double slack = 1e-9) {
  std::vector<extrap::Point> grid = extrap::grid_points(dom, n);
  double prev = family.eval_function(c, grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double cur = family.eval_function(c, grid[i]);
    if (cur < prev - slack) return false;
    prev = cur;
  }
  return true;
}

}  // namespace oracles
