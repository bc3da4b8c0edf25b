#pragma once

#include <algorithm>
#include <cmath>

#include "skewform/skew_ring.hpp"

namespace testutil {

using skewform::Scalar;

inline bool near(Scalar x, Scalar y, double rel = 1e-12) {
  return std::abs(x - y) <= rel * std::max({1.0, std::abs(x), std::abs(y)});
}

inline double gap(const skewform::SkewPoly& x, const skewform::SkewPoly& y) {
  return (x - y).max_coefficient() / std::max({1.0, x.max_coefficient(), y.max_coefficient()});
}

inline double gap(const skewform::QuadraticForm& x, const skewform::QuadraticForm& y) {
  return gap(x.to_poly(), y.to_poly());
}

inline skewform::MuMatrix mu3(Scalar m12, Scalar m13, Scalar m23) {
  const Scalar u[] = {m12, m13, m23};
  return skewform::MuMatrix::from_upper(3, u);
}

inline skewform::MuMatrix mu2(Scalar m12) {
  const Scalar u[] = {m12};
  return skewform::MuMatrix::from_upper(2, u);
}

}  // namespace testutil
