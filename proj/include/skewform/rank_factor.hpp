#pragma once

// mu-rank classification and constructive factorization of quadratic forms.
//
// Every classifier first rescales the form so its largest coefficient has
// magnitude 1 and snaps coefficients within tolerance to exact zero. For
// n = 3 the form is then divided by a = alpha_11 when a != 0, so the
// invariants are always evaluated at a in {0, 1}. Witnesses are built for
// the rescaled form, mapped back, and re-expanded in the skew ring before
// they are returned.

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "skewform/mu_invariants.hpp"

namespace skewform {

struct ZeroForm {};
struct Square {
  LinearForm l;
};
struct Product {
  LinearForm l1;
  LinearForm l2;
};
/// l1 l2 + l3^2.
struct SumOfProducts {
  LinearForm l1;
  LinearForm l2;
  LinearForm l3;
};

struct Factorization {
  MuMatrix mu;
  std::variant<ZeroForm, Square, Product, SumOfProducts> shape;
  std::optional<RadicalPair> radicals;  // D8 branch (n = 3, a != 0)
  std::optional<Scalar> h;              // H^2 = b^2 - mu_12 ac (n = 2)
  /// Scaled residual of the re-expansion against the source form.
  double residual = 0.0;

  [[nodiscard]] bool is_zero() const { return std::holds_alternative<ZeroForm>(shape); }
  [[nodiscard]] bool is_square() const { return std::holds_alternative<Square>(shape); }
  [[nodiscard]] bool is_product() const { return std::holds_alternative<Product>(shape); }
  [[nodiscard]] bool is_sum_of_products() const { return std::holds_alternative<SumOfProducts>(shape); }
};

/// Re-expansion through skew-ring multiplication.
SkewPoly expand(const Factorization& f);

/// max |coefficient difference| / max(1, largest coefficient of q).
double scaled_residual(const QuadraticForm& q, const SkewPoly& p);

struct RankDiagnostics {
  /// Q = normalizer * (form the invariants were evaluated on).
  Scalar normalizer{1.0};
  /// max(1, largest coefficient) of the normalized form.
  double scale = 1.0;
  std::optional<Scalar> d;                      // n = 2
  std::optional<std::array<Scalar, 6>> minors;  // n = 3
  std::optional<Scalar> d7;
  std::optional<std::array<D8Value, 4>> d8;
  std::optional<Scalar> sextic;
  /// Normalized a is 1 (true) or 0 (false); n = 3 only.
  std::optional<bool> a_is_one;
};

struct MuRank {
  int value = 0;
  RankDiagnostics diagnostics;
};

MuRank mu_rank_2(const QuadraticForm& q, Tolerance tol = {});
MuRank mu_rank_3(const QuadraticForm& q, Tolerance tol = {});

/// n <= 3: the exact classifiers. n >= 4: 1 for perfect squares, otherwise
/// nullopt meaning "at least 2, not determined".
std::optional<int> mu_rank_general(const QuadraticForm& q, Tolerance tol = {});

/// n = 2 square test: L with L^2 = Q, present iff D(M) vanishes.
std::optional<LinearForm> square_2(const QuadraticForm& q, Tolerance tol = {});

/// n = 2: all factorization classes up to scalars (one or two). The class
/// that is a perfect square is reported as Square. Throws InputError for Q = 0.
std::vector<Factorization> factor_2(const QuadraticForm& q, Tolerance tol = {});

/// n = 2: b^2 = mu_12 ac. Throws InputError for Q = 0.
bool unique_factor_2(const QuadraticForm& q, Tolerance tol = {});

/// n = 3: Q = L1 L2 + L3^2, always exists.
Factorization decompose_3(const QuadraticForm& q, Tolerance tol = {});

/// n = 3: L with L^2 = Q when D1..D6 all vanish.
std::optional<LinearForm> square_3(const QuadraticForm& q, Tolerance tol = {});

/// n = 3: Q = L1 L2 when (1 - a) D7 + a D8 vanishes for the normalized form.
std::optional<Factorization> factor_3(const QuadraticForm& q, Tolerance tol = {});

/// Any n: L with L^2 = Q by sign enumeration over the diagonal roots.
std::optional<LinearForm> square_general(const QuadraticForm& q, Tolerance tol = {});

struct PermutedRank {
  std::vector<std::size_t> perm;
  int rank = 0;
};

/// Rank of the relabeled form under every generator permutation (n <= 3).
std::vector<PermutedRank> rank_under_permutations(const QuadraticForm& q, Tolerance tol = {});

/// Scale so the first nonzero coefficient is 1 and return the factor removed.
std::pair<LinearForm, Scalar> make_monic(const LinearForm& l, Tolerance tol = {});

/// Sign choice making the first nonzero coefficient have positive real part
/// (positive imaginary part when the real part is zero).
LinearForm canonical_sign(const LinearForm& l, Tolerance tol = {});

}  // namespace skewform
