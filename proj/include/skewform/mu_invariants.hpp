#pragma once

// Scalar invariants of mu-symmetric matrices: the 2x2 mu-determinant D, the
// 3x3 mu-minors D1..D6, the mu-determinants D7 and D8, and the degree-six
// polynomial obtained by clearing the radicals in D8 = 0.
//
// All functions read M in the layout
//   n = 2: [[a, b], [mu_21 b, c]]
//   n = 3: [[a, d, e], [mu_21 d, b, f], [mu_31 e, mu_32 f, c]]

#include <array>

#include "skewform/mu_correspond.hpp"

namespace skewform {

/// Sign choice for one square root: Plus picks the principal root.
enum class Sign { Plus, Minus };

struct SignPair {
  Sign x = Sign::Plus;
  Sign y = Sign::Plus;
};

/// The four sign pairs in enumeration order (+,+), (+,-), (-,+), (-,-).
inline constexpr std::array<SignPair, 4> kAllSignPairs{{
    {Sign::Plus, Sign::Plus},
    {Sign::Plus, Sign::Minus},
    {Sign::Minus, Sign::Plus},
    {Sign::Minus, Sign::Minus},
}};

/// X with X^2 = d^2 - mu_12 ab and Y with Y^2 = e^2 - mu_13 ac.
struct RadicalPair {
  Scalar x;
  Scalar y;
  SignPair signs;
};

struct D8Value {
  Scalar value;
  RadicalPair radicals;
};

/// D(M) = 4b^2 - (1 + mu_12)^2 ac.
Scalar mu_det_2(const MuSymmetricMatrix& m);

/// D1..D6 in order.
std::array<Scalar, 6> mu_minors_3(const MuSymmetricMatrix& m);

/// D7(M) = (mu_23 cd^2 - 2def + be^2)(mu_13 mu_21 cd^2 - 2def + mu_12 mu_23 mu_31 be^2).
Scalar mu_det_D7(const MuSymmetricMatrix& m);

/// The two cubic factors of D7, left then right.
std::array<Scalar, 2> mu_det_D7_factors(const MuSymmetricMatrix& m);

/// Radicands within tol * scale^2 of zero are snapped so the root is exactly 0.
RadicalPair radicals(const MuSymmetricMatrix& m, SignPair signs, Tolerance tol = {});

/// D8(M) = mu_21 (d + X)(e - Y) + mu_23 mu_31 (d - X)(e + Y) - 2af.
D8Value mu_det_D8(const MuSymmetricMatrix& m, SignPair signs, Tolerance tol = {});

/// All four sign pairs, in kAllSignPairs order.
std::array<D8Value, 4> mu_det_D8_all_signs(const MuSymmetricMatrix& m, Tolerance tol = {});

/// The sign pair whose D8 has the smallest magnitude (first one on ties).
D8Value mu_det_D8_any_sign(const MuSymmetricMatrix& m, Tolerance tol = {});

/// The degree-six polynomial in a..f, mu_12, mu_13, mu_23.
Scalar sextic(const MuSymmetricMatrix& m);

/// Simplified forms valid when mu_13 = mu_12 mu_23. Throw InputError otherwise.
Scalar twist_simplified_D7(const MuSymmetricMatrix& m, Tolerance tol = {});
Scalar twist_simplified_D8(const MuSymmetricMatrix& m, SignPair signs, Tolerance tol = {});

}  // namespace skewform
