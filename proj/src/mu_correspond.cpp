#include "skewform/mu_correspond.hpp"

#include <string>

#include "skewform/errors.hpp"

namespace skewform {

MuSymmetricMatrix::MuSymmetricMatrix(MuMatrix mu, std::vector<Scalar> row_major)
    : mu_(std::move(mu)), entries_(std::move(row_major)) {
  if (entries_.size() != n() * n()) throw InputError("matrix needs n*n entries");
  for (const auto& x : entries_)
    if (!is_finite(x)) throw InputError("non-finite matrix entry");
}

std::optional<std::pair<std::size_t, std::size_t>> MuSymmetricMatrix::asymmetry(Tolerance tol) const {
  const double scale = max_entry();
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i + 1; j < n(); ++j)
      if (!tol.equal((*this)(i, j), mu_(i, j) * (*this)(j, i), scale)) return std::pair{i, j};
  return std::nullopt;
}

Coeffs3 MuSymmetricMatrix::coeffs3() const {
  if (n() != 3) throw InputError("coeffs3 requires n = 3");
  const auto& m = *this;
  return {m(0, 0), m(1, 1), m(2, 2), m(0, 1), m(0, 2), m(1, 2)};
}

Coeffs2 MuSymmetricMatrix::coeffs2() const {
  if (n() != 2) throw InputError("coeffs2 requires n = 2");
  const auto& m = *this;
  return {m(0, 0), m(0, 1), m(1, 1)};
}

MuSymmetricMatrix MuSymmetricMatrix::scaled(Scalar s) const {
  auto e = entries_;
  for (auto& x : e) x *= s;
  return MuSymmetricMatrix(mu_, std::move(e));
}

MuSymmetricMatrix form_to_matrix(const QuadraticForm& q) {
  const auto n = q.n();
  const auto& mu = q.mu();
  std::vector<Scalar> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i * n + i] = q.alpha(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Scalar half = q.alpha(i, j) / 2.0;
      e[i * n + j] = half;
      e[j * n + i] = mu(j, i) * half;
    }
  }
  return MuSymmetricMatrix(mu, std::move(e));
}

QuadraticForm matrix_to_form(const MuSymmetricMatrix& m, Tolerance tol) {
  if (auto bad = m.asymmetry(tol)) {
    throw InputError("matrix is not mu-symmetric at (" + std::to_string(bad->first + 1) + ", " +
                     std::to_string(bad->second + 1) + ")");
  }
  const auto n = m.n();
  const auto& mu = m.mu();
  std::vector<Scalar> u;
  u.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    u.push_back(m(i, i));
    // Symmetrizing preserves M_ij + mu_ij M_ji, so the sum is the coefficient.
    for (std::size_t j = i + 1; j < n; ++j) u.push_back(m(i, j) + mu(i, j) * m(j, i));
  }
  return QuadraticForm(mu, std::move(u));
}

}  // namespace skewform
