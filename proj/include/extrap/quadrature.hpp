#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace extrap {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [-1,1]. Nodes are the roots of the
/// Legendre polynomial P_n, found by Newton iteration from the Chebyshev
/// initial guess; weights w_i = 2 / ((1 - x_i^2) P_n'(x_i)^2).
/// Exact for polynomials of degree <= 2n-1.
inline QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // P_n(x) and P_n'(x) via the Legendre recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline QuadRule gauss_legendre(int n, double a, double b) {
  QuadRule rule = gauss_legendre(n);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = mid + half * rule.nodes[static_cast<std::size_t>(i)];
    rule.weights[static_cast<std::size_t>(i)] *= half;
  }
  return rule;
}

/// Composite trapezoid rule with n nodes on [a, b], endpoints included.
inline QuadRule trapezoid(int n, double a, double b) {
  if (n < 2) throw std::invalid_argument("trapezoid: need n >= 2");
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = a + h * i;
    rule.weights[static_cast<std::size_t>(i)] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  return rule;
}

}  // namespace extrap
