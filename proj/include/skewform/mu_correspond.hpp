#pragma once

// The correspondence between quadratic forms and mu-symmetric matrices.

#include <optional>
#include <utility>
#include <vector>

#include "skewform/skew_ring.hpp"

namespace skewform {

/// n x n matrix with M_ij = mu_ij M_ji. The constructor does not enforce the
/// relation; matrix_to_form() validates it.
class MuSymmetricMatrix {
 public:
  MuSymmetricMatrix(MuMatrix mu, std::vector<Scalar> row_major);

  [[nodiscard]] const MuMatrix& mu() const noexcept { return mu_; }
  [[nodiscard]] std::size_t n() const noexcept { return mu_.n(); }
  [[nodiscard]] Scalar operator()(std::size_t i, std::size_t j) const { return entries_[i * n() + j]; }
  [[nodiscard]] std::span<const Scalar> entries() const noexcept { return entries_; }
  [[nodiscard]] double max_entry() const { return max_magnitude(entries_); }

  /// First (i, j), i < j, violating M_ij = mu_ij M_ji beyond tolerance.
  [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> asymmetry(Tolerance tol = {}) const;

  /// Named entries [[a, d, e], [., b, f], [., ., c]] (n = 3).
  [[nodiscard]] Coeffs3 coeffs3() const;
  /// Named entries [[a, b], [., c]] (n = 2).
  [[nodiscard]] Coeffs2 coeffs2() const;

  [[nodiscard]] MuSymmetricMatrix scaled(Scalar s) const;

 private:
  MuMatrix mu_;
  std::vector<Scalar> entries_;
};

/// M_kk = alpha_kk, M_ij = alpha_ij / 2, M_ji = mu_ji alpha_ij / 2 (i < j).
MuSymmetricMatrix form_to_matrix(const QuadraticForm& q);

/// alpha_kk = M_kk, alpha_ij = M_ij + mu_ij M_ji. Entries that are
/// mu-symmetric only within tolerance are first replaced by the exact pair
/// with the same M_ij + mu_ij M_ji; beyond tolerance throws InputError
/// naming the pair.
QuadraticForm matrix_to_form(const MuSymmetricMatrix& m, Tolerance tol = {});

}  // namespace skewform
