#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace extrap {

/// Chebyshev polynomial of the first kind, T_k(x), by the three-term
/// recurrence T_0 = 1, T_1 = x, T_{k+1} = 2 x T_k - T_{k-1}.
inline double chebyshev_t(int k, double x) {
  if (k < 0) throw std::invalid_argument("chebyshev_t: negative degree");
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int i = 1; i < k; ++i) {
    double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// T_0..T_{n-1} at x, written into out (resized to n).
inline void chebyshev_all(int n, double x, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(n));
  if (n <= 0) return;
  out[0] = 1.0;
  if (n == 1) return;
  out[1] = x;
  for (int k = 2; k < n; ++k) out[k] = 2.0 * x * out[k - 1] - out[k - 2];
}

/// Evaluates sum_k c_k T_k(x) by Clenshaw's rule.
inline double chebyshev_series(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) {
    double b0 = 2.0 * x * b1 - b2 + c[i];
    b2 = b1;
    b1 = b0;
  }
  return c.empty() ? 0.0 : c[0] + x * b1 - b2;
}

/// Chebyshev coefficients of the antiderivative of sum_k a_k T_k, with
/// integration constant 0 (constant coefficient of the result is 0).
/// The result has one more slot than the input.
inline std::vector<double> chebyshev_antiderivative(const std::vector<double>& a) {
  std::vector<double> b(a.size() + 1, 0.0);
  if (!a.empty()) b[1] += a[0];
  if (a.size() > 1) b[2] += a[1] / 4.0;
  for (std::size_t k = 2; k < a.size(); ++k) {
    b[k + 1] += a[k] / (2.0 * (static_cast<double>(k) + 1.0));
    b[k - 1] -= a[k] / (2.0 * (static_cast<double>(k) - 1.0));
  }
  b[0] = 0.0;
  return b;
}

/// Associated Legendre P_l^m(t) for 0 <= m <= l, Condon-Shortley phase
/// included. Diagonal seed P_m^m, one step up, then the upward recurrence
/// (l-m) P_l^m = (2l-1) t P_{l-1}^m - (l+m-1) P_{l-2}^m.
inline double assoc_legendre(int l, int m, double t) {
  if (m < 0 || m > l) throw std::invalid_argument("assoc_legendre: need 0 <= m <= l");
  if (t < -1.0 || t > 1.0) throw std::invalid_argument("assoc_legendre: t outside [-1,1]");
  double pmm = 1.0;
  if (m > 0) {
    double s = std::sqrt((1.0 - t) * (1.0 + t));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= -fact * s;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = t * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (t * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

/// Position of (l, m) in the family ordering (0,0), (1,1), (1,0), (1,-1),
/// (2,2), ... : degrees ascending, m descending within a degree. 0-based.
inline int sph_harm_index(int l, int m) { return l * l + (l - m); }

/// Orthonormal real spherical harmonic Y_{l,m}(theta, phi), built from the
/// complex harmonics by the usual real recombination:
///   m > 0 :  sqrt(2) N_{l,m} P_l^m(cos theta) cos(m phi)
///   m = 0 :          N_{l,0} P_l^0(cos theta)
///   m < 0 :  sqrt(2) N_{l,|m|} P_l^{|m|}(cos theta) sin(|m| phi)
/// with N_{l,m} = sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!).
inline double real_sph_harm(int l, int m, double theta, double phi) {
  int am = std::abs(m);
  if (am > l) throw std::invalid_argument("real_sph_harm: need |m| <= l");
  double ratio = 1.0;  // (l-|m|)! / (l+|m|)!
  for (int i = l - am + 1; i <= l + am; ++i) ratio /= static_cast<double>(i);
  double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
  double p = assoc_legendre(l, am, std::cos(theta));
  if (m > 0) return std::numbers::sqrt2 * norm * p * std::cos(am * phi);
  if (m < 0) return std::numbers::sqrt2 * norm * p * std::sin(am * phi);
  return norm * p;
}

/// All real harmonics with l <= l_max at (theta, phi), family ordering.
inline void real_sph_harm_all(int l_max, double theta, double phi,
                              std::vector<double>& out) {
  out.resize(static_cast<std::size_t>((l_max + 1) * (l_max + 1)));
  for (int l = 0; l <= l_max; ++l)
    for (int m = l; m >= -l; --m)
      out[static_cast<std::size_t>(sph_harm_index(l, m))] = real_sph_harm(l, m, theta, phi);
}

}  // namespace extrap
