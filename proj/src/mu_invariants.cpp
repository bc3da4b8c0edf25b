#include "skewform/mu_invariants.hpp"

#include "skewform/errors.hpp"

namespace skewform {

namespace {

void require_n(const MuSymmetricMatrix& m, std::size_t n) {
  if (m.n() != n) throw InputError("invariant requires n = " + std::to_string(n));
}

void require_twist(const MuSymmetricMatrix& m, Tolerance tol) {
  require_n(m, 3);
  if (!is_twist_of_polynomial_ring(m.mu(), tol)) throw InputError("not a twist: mu_13 != mu_12 mu_23");
}

Scalar signed_root(Scalar radicand, Sign s, double scale, Tolerance tol) {
  if (tol.is_zero(radicand, scale, 2)) return 0.0;
  const Scalar r = principal_sqrt(radicand);
  return s == Sign::Plus ? r : -r;
}

}  // namespace

Scalar mu_det_2(const MuSymmetricMatrix& m) {
  require_n(m, 2);
  const auto [a, b, c] = m.coeffs2();
  const Scalar s = 1.0 + m.mu()(0, 1);
  return 4.0 * b * b - s * s * a * c;
}

std::array<Scalar, 6> mu_minors_3(const MuSymmetricMatrix& m) {
  require_n(m, 3);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const auto& mu = m.mu();
  const Scalar s12 = 1.0 + mu(0, 1);
  const Scalar s13 = 1.0 + mu(0, 2);
  const Scalar s23 = 1.0 + mu(1, 2);
  return {
      4.0 * d * d - s12 * s12 * a * b,
      4.0 * e * e - s13 * s13 * a * c,
      4.0 * f * f - s23 * s23 * b * c,
      2.0 * s23 * d * e - s12 * s13 * a * f,
      2.0 * s12 * e * f - s13 * s23 * c * d,
      2.0 * s13 * d * f - s12 * s23 * b * e,
  };
}

std::array<Scalar, 2> mu_det_D7_factors(const MuSymmetricMatrix& m) {
  require_n(m, 3);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const auto& mu = m.mu();
  return {mu(1, 2) * c * d * d - 2.0 * d * e * f + b * e * e,
          mu(0, 2) * mu(1, 0) * c * d * d - 2.0 * d * e * f + mu(0, 1) * mu(1, 2) * mu(2, 0) * b * e * e};
}

Scalar mu_det_D7(const MuSymmetricMatrix& m) {
  const auto [left, right] = mu_det_D7_factors(m);
  return left * right;
}

RadicalPair radicals(const MuSymmetricMatrix& m, SignPair signs, Tolerance tol) {
  require_n(m, 3);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const auto& mu = m.mu();
  const double scale = m.max_entry();
  return {signed_root(d * d - mu(0, 1) * a * b, signs.x, scale, tol),
          signed_root(e * e - mu(0, 2) * a * c, signs.y, scale, tol), signs};
}

D8Value mu_det_D8(const MuSymmetricMatrix& m, SignPair signs, Tolerance tol) {
  const auto r = radicals(m, signs, tol);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const auto& mu = m.mu();
  const Scalar v = mu(1, 0) * (d + r.x) * (e - r.y) + mu(1, 2) * mu(2, 0) * (d - r.x) * (e + r.y) - 2.0 * a * f;
  return {v, r};
}

std::array<D8Value, 4> mu_det_D8_all_signs(const MuSymmetricMatrix& m, Tolerance tol) {
  std::array<D8Value, 4> out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = mu_det_D8(m, kAllSignPairs[k], tol);
  return out;
}

D8Value mu_det_D8_any_sign(const MuSymmetricMatrix& m, Tolerance tol) {
  const auto all = mu_det_D8_all_signs(m, tol);
  D8Value best = all[0];
  for (std::size_t k = 1; k < 4; ++k)
    if (std::abs(all[k].value) < std::abs(best.value)) best = all[k];
  return best;
}

Scalar sextic(const MuSymmetricMatrix& m) {
  require_n(m, 3);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const auto& mu = m.mu();
  const Scalar m12 = mu(0, 1);
  const Scalar m13 = mu(0, 2);
  const Scalar m23 = mu(1, 2);
  const Scalar s = m13 + m12 * m23;
  const Scalar s2 = s * s;
  const Scalar a2 = a * a, b2 = b * b, c2 = c * c;
  const Scalar d2 = d * d, e2 = e * e, f2 = f * f;

  Scalar r = s2 * s2 * a2 * b2 * c2;
  r += 64.0 * m12 * m13 * m23 * d2 * e2 * f2;
  r += 16.0 * (m12 * m12 * m13 * m13 * a2 * f2 * f2 + m12 * m12 * m23 * m23 * b2 * e2 * e2 +
               m13 * m13 * m23 * m23 * c2 * d2 * d2);
  r += 16.0 * (m13 * m13 + m12 * m12 * m23 * m23) *
       (m12 * a * b * e2 * f2 + m13 * a * c * d2 * f2 + m23 * b * c * d2 * e2);
  r -= 32.0 * s *
       (m12 * m13 * a * d * e * f2 * f + m12 * m23 * b * d * e2 * e * f + m13 * m23 * c * d2 * d * e * f);
  r -= 8.0 * s2 * (m12 * m13 * a2 * b * c * f2 + m12 * m23 * a * b2 * c * e2 + m13 * m23 * a * b * c2 * d2);
  r -= 8.0 *
       (m13 * m13 * m13 - 5.0 * m12 * m13 * m13 * m23 - 5.0 * m12 * m12 * m13 * m23 * m23 +
        m12 * m12 * m12 * m23 * m23 * m23) *
       a * b * c * d * e * f;
  return r;
}

Scalar twist_simplified_D7(const MuSymmetricMatrix& m, Tolerance tol) {
  require_twist(m, tol);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const Scalar g = m.mu()(1, 2) * c * d * d - 2.0 * d * e * f + b * e * e;
  return g * g;
}

Scalar twist_simplified_D8(const MuSymmetricMatrix& m, SignPair signs, Tolerance tol) {
  require_twist(m, tol);
  const auto r = radicals(m, signs, tol);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  return 2.0 * (m.mu()(1, 0) * (d * e - r.x * r.y) - a * f);
}

}  // namespace skewform
