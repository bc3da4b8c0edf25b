#pragma once

// Arithmetic in the quantum affine ring on generators z_1..z_n with defining
// relations z_j z_i = mu_ij z_i z_j. Generator indices in this API are
// 0-based; only the text layer (parser/printer) speaks z1..zn.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "skewform/scalar.hpp"

namespace skewform {

/// The n x n structure matrix mu. Invariants: mu_ii = 1, mu_ij * mu_ji = 1,
/// every entry nonzero and finite.
class MuMatrix {
 public:
  /// All entries 1: the commutative polynomial ring.
  static MuMatrix identity(std::size_t n);

  /// Row-major n*n entries, validated against the invariants within `tol`.
  static MuMatrix from_entries(std::size_t n, std::vector<Scalar> row_major, Tolerance tol = {});

  /// Strictly-upper entries mu_12, mu_13, ..., mu_23, ... in row order; the
  /// lower triangle is filled with reciprocals.
  static MuMatrix from_upper(std::size_t n, std::span<const Scalar> upper);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] Scalar operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  [[nodiscard]] std::span<const Scalar> entries() const noexcept { return entries_; }

  /// Relabel generators: entry (k, l) of the result is entry (perm[k], perm[l]).
  [[nodiscard]] MuMatrix permuted(std::span<const std::size_t> perm) const;

  [[nodiscard]] bool approx_equal(const MuMatrix& other, Tolerance tol = {}) const;

 private:
  MuMatrix(std::size_t n, std::vector<Scalar> entries) : n_(n), entries_(std::move(entries)) {}

  std::size_t n_;
  std::vector<Scalar> entries_;
};

/// Ordered monomial z_1^{e_1} ... z_n^{e_n}.
struct Monomial {
  std::vector<unsigned> exponents;

  [[nodiscard]] unsigned degree() const;
  /// The generator word z_1 ... z_1 z_2 ... (0-based indices).
  [[nodiscard]] std::vector<std::size_t> word() const;

  auto operator<=>(const Monomial&) const = default;
};

/// A word with a coefficient, not yet normal-ordered.
struct RawTerm {
  Scalar coeff;
  std::vector<std::size_t> word;
};

enum class RewriteOrder { LeftToRight, RightToLeft };

/// Element of S on the ordered monomial basis. Terms are kept in descending
/// lexicographic exponent order. Arithmetic drops exactly-zero coefficients
/// only; normal_form() and pruned() also drop near-zero ones.
class SkewPoly {
 public:
  using Terms = std::map<Monomial, Scalar, std::greater<>>;

  explicit SkewPoly(MuMatrix mu) : mu_(std::move(mu)) {}
  SkewPoly(MuMatrix mu, Terms terms);

  static SkewPoly constant(MuMatrix mu, Scalar c);
  static SkewPoly generator(MuMatrix mu, std::size_t i, Scalar c = 1.0);

  [[nodiscard]] const MuMatrix& mu() const noexcept { return mu_; }
  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] Scalar coeff(const Monomial& m) const;
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const;
  [[nodiscard]] double max_coefficient() const;
  [[nodiscard]] bool is_homogeneous(unsigned degree) const;

  /// Drops coefficients with |c| <= tol * max(1, max_coefficient()).
  [[nodiscard]] SkewPoly pruned(Tolerance tol = {}) const;

  /// Relabel generators (see MuMatrix::permuted): old generator perm[k]
  /// becomes new generator k, and monomials are re-normal-ordered.
  [[nodiscard]] SkewPoly relabeled(std::span<const std::size_t> perm) const;

  friend SkewPoly operator+(const SkewPoly& p, const SkewPoly& q);
  friend SkewPoly operator-(const SkewPoly& p, const SkewPoly& q);
  friend SkewPoly operator*(const SkewPoly& p, const SkewPoly& q);
  friend SkewPoly operator*(Scalar s, const SkewPoly& p);

 private:
  MuMatrix mu_;
  Terms terms_;
};

/// Rewrites every word to the ordered basis by adjacent transpositions
/// z_j z_i -> mu_ij z_i z_j (j > i), combines like terms and drops near-zero
/// coefficients. Throws InputError for generator indices >= n.
SkewPoly normal_form(const MuMatrix& mu, std::span<const RawTerm> raw,
                     RewriteOrder order = RewriteOrder::LeftToRight, Tolerance tol = {});

/// Coefficient picked up while bubble-sorting one word; `word` is sorted in place.
Scalar normal_order_word(const MuMatrix& mu, std::vector<std::size_t>& word,
                         RewriteOrder order = RewriteOrder::LeftToRight);

SkewPoly multiply(const SkewPoly& p, const SkewPoly& q);

/// Sum alpha_i z_i.
class LinearForm {
 public:
  LinearForm(MuMatrix mu, std::vector<Scalar> coeffs);
  static LinearForm zero(MuMatrix mu);

  [[nodiscard]] const MuMatrix& mu() const noexcept { return mu_; }
  [[nodiscard]] std::size_t n() const noexcept { return coeffs_.size(); }
  [[nodiscard]] Scalar operator[](std::size_t i) const { return coeffs_[i]; }
  [[nodiscard]] std::span<const Scalar> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] bool is_zero(Tolerance tol = {}) const;

  [[nodiscard]] LinearForm scaled(Scalar s) const;
  [[nodiscard]] SkewPoly to_poly() const;
  [[nodiscard]] LinearForm relabeled(std::span<const std::size_t> perm) const;
  /// Embed into a larger ring: coefficient i goes to generator slots[i].
  [[nodiscard]] LinearForm lifted(const MuMatrix& target, std::span<const std::size_t> slots) const;

 private:
  MuMatrix mu_;
  std::vector<Scalar> coeffs_;
};

/// Named coefficients for three generators:
/// Q = a z1^2 + b z2^2 + c z3^2 + 2d z1z2 + 2e z1z3 + 2f z2z3.
struct Coeffs3 {
  Scalar a, b, c, d, e, f;
};

/// Two generators: Q = a z1^2 + 2b z1z2 + c z2^2.
struct Coeffs2 {
  Scalar a, b, c;
};

/// Sum_{i <= j} alpha_ij z_i z_j.
class QuadraticForm {
 public:
  explicit QuadraticForm(MuMatrix mu);
  /// `upper` lists alpha_ij for i <= j in row order (alpha_11, alpha_12, ...).
  QuadraticForm(MuMatrix mu, std::vector<Scalar> upper);

  static QuadraticForm from_coeffs(MuMatrix mu, const Coeffs2& c);
  static QuadraticForm from_coeffs(MuMatrix mu, const Coeffs3& c);
  /// Throws InputError unless `p` is homogeneous of degree 2 within `tol`.
  static QuadraticForm from_poly(const SkewPoly& p, Tolerance tol = {});

  [[nodiscard]] const MuMatrix& mu() const noexcept { return mu_; }
  [[nodiscard]] std::size_t n() const noexcept { return mu_.n(); }
  /// Requires i <= j.
  [[nodiscard]] Scalar alpha(std::size_t i, std::size_t j) const;
  [[nodiscard]] std::span<const Scalar> upper() const noexcept { return upper_; }

  [[nodiscard]] Coeffs2 coeffs2() const;
  [[nodiscard]] Coeffs3 coeffs3() const;

  [[nodiscard]] double max_coefficient() const { return max_magnitude(upper_); }
  [[nodiscard]] bool is_zero(Tolerance tol = {}) const;
  [[nodiscard]] QuadraticForm scaled(Scalar s) const;
  [[nodiscard]] SkewPoly to_poly() const;
  [[nodiscard]] QuadraticForm relabeled(std::span<const std::size_t> perm) const;

  friend QuadraticForm operator+(const QuadraticForm& p, const QuadraticForm& q);

 private:
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const;

  MuMatrix mu_;
  std::vector<Scalar> upper_;
};

/// L^2 by the closed form alpha_i^2 on the diagonal and (1 + mu_ij) alpha_i alpha_j off it.
QuadraticForm square_linear(const LinearForm& l);

/// L1 L2 by the closed form alpha_i beta_i, alpha_i beta_j + mu_ij alpha_j beta_i (i < j).
QuadraticForm product_linear(const LinearForm& l1, const LinearForm& l2);

/// True iff mu_ik = mu_ij mu_jk for all i, j, k, i.e. S is a twist of the
/// polynomial ring by a diagonal automorphism.
bool is_twist_of_polynomial_ring(const MuMatrix& mu, Tolerance tol = {});

/// n = 2 only: forms r1 * tau(r2) in the commutative ring, with
/// tau(z1) = mu_12 z1 and tau(z2) = z2, and reads it back as an element of S.
QuadraticForm tau_star_product(const LinearForm& r1, const LinearForm& r2);

/// Throws InputError if the two contexts differ.
void require_same_mu(const MuMatrix& p, const MuMatrix& q);

}  // namespace skewform
