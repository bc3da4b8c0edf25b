#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <span>

namespace skewform {

/// Field elements are complex doubles; every square root the constructions
/// need exists there.
using Scalar = std::complex<double>;

/// Default comparison tolerance. Zero tests are |x| <= tol * scale^k where
/// scale = max(1, largest input coefficient magnitude) and k is the degree
/// of x as a homogeneous function of those coefficients.
inline constexpr double kDefaultTolerance = 1e-9;

struct Tolerance {
  double tol = kDefaultTolerance;

  [[nodiscard]] bool is_zero(Scalar x, double scale = 1.0, int degree = 1) const {
    return std::abs(x) <= tol * std::pow(std::max(1.0, scale), degree);
  }
  [[nodiscard]] bool equal(Scalar x, Scalar y, double scale = 1.0) const {
    return is_zero(x - y, scale);
  }
};

inline double max_magnitude(std::span<const Scalar> xs) {
  double m = 0.0;
  for (const auto& x : xs) m = std::max(m, std::abs(x));
  return m;
}

inline double max_magnitude(std::initializer_list<Scalar> xs) {
  return max_magnitude(std::span<const Scalar>(xs.begin(), xs.size()));
}

/// Principal square root: non-negative real part, and positive imaginary
/// part on the negative real axis.
inline Scalar principal_sqrt(Scalar x) {
  if (x.imag() == 0.0) {
    if (x.real() >= 0.0) return {std::sqrt(x.real()), 0.0};
    return {0.0, std::sqrt(-x.real())};
  }
  return std::sqrt(x);
}

inline bool is_finite(Scalar x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

}  // namespace skewform
