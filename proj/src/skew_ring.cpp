#include "skewform/skew_ring.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "skewform/errors.hpp"

namespace skewform {

namespace {

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

void add_term(SkewPoly::Terms& terms, Monomial m, Scalar c) {
  if (c == Scalar{}) return;
  auto [it, inserted] = terms.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == Scalar{}) terms.erase(it);
  }
}

Monomial monomial_of_sorted_word(std::size_t n, std::span<const std::size_t> word) {
  Monomial m{std::vector<unsigned>(n, 0)};
  for (auto g : word) ++m.exponents[g];
  return m;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= perm.size()) throw InputError("permutation entry out of range");
    inv[perm[k]] = k;
  }
  return inv;
}

}  // namespace

// ---------------------------------------------------------------- MuMatrix

MuMatrix MuMatrix::identity(std::size_t n) {
  if (n == 0) throw InputError("mu matrix needs at least one generator");
  return MuMatrix(n, std::vector<Scalar>(n * n, Scalar{1.0}));
}

MuMatrix MuMatrix::from_entries(std::size_t n, std::vector<Scalar> row_major, Tolerance tol) {
  if (n == 0) throw InputError("mu matrix needs at least one generator");
  if (row_major.size() != n * n)
    throw InputError("mu matrix needs " + std::to_string(n * n) + " entries, got " +
                     std::to_string(row_major.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar m = row_major[i * n + j];
      if (!is_finite(m)) throw InputError("mu" + pair_name(i, j) + " is not finite");
      if (m == Scalar{}) throw InputError("mu" + pair_name(i, j) + " is zero");
      if (i == j && !tol.equal(m, 1.0)) throw InputError("mu" + pair_name(i, i) + " must be 1");
      if (i < j && !tol.equal(m * row_major[j * n + i], 1.0, std::abs(m)))
        throw InputError("mu" + pair_name(i, j) + " * mu" + pair_name(j, i) + " must be 1");
    }
    row_major[i * n + i] = 1.0;
  }
  return MuMatrix(n, std::move(row_major));
}

MuMatrix MuMatrix::from_upper(std::size_t n, std::span<const Scalar> upper) {
  if (n == 0) throw InputError("mu matrix needs at least one generator");
  if (upper.size() != n * (n - 1) / 2)
    throw InputError("expected " + std::to_string(n * (n - 1) / 2) + " upper mu entries");
  std::vector<Scalar> e(n * n, Scalar{1.0});
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const Scalar m = upper[k];
      if (!is_finite(m) || m == Scalar{}) throw InputError("mu" + pair_name(i, j) + " must be finite and nonzero");
      e[i * n + j] = m;
      e[j * n + i] = 1.0 / m;
    }
  }
  return MuMatrix(n, std::move(e));
}

MuMatrix MuMatrix::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw InputError("permutation length must equal n");
  (void)inverse_permutation(perm);
  std::vector<Scalar> e(n_ * n_);
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t l = 0; l < n_; ++l) e[k * n_ + l] = (*this)(perm[k], perm[l]);
  return MuMatrix(n_, std::move(e));
}

bool MuMatrix::approx_equal(const MuMatrix& other, Tolerance tol) const {
  if (n_ != other.n_) return false;
  for (std::size_t k = 0; k < entries_.size(); ++k)
    if (!tol.equal(entries_[k], other.entries_[k], std::abs(entries_[k]))) return false;
  return true;
}

void require_same_mu(const MuMatrix& p, const MuMatrix& q) {
  if (!p.approx_equal(q)) throw InputError("operands live in different mu contexts");
}

// ---------------------------------------------------------------- Monomial

unsigned Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0u); }

std::vector<std::size_t> Monomial::word() const {
  std::vector<std::size_t> w;
  w.reserve(degree());
  for (std::size_t i = 0; i < exponents.size(); ++i) w.insert(w.end(), exponents[i], i);
  return w;
}

// ---------------------------------------------------------------- rewriting

Scalar normal_order_word(const MuMatrix& mu, std::vector<std::size_t>& word, RewriteOrder order) {
  Scalar factor{1.0};
  if (word.size() < 2) return factor;
  // Each pass swaps every out-of-order adjacent pair it meets; a swap of
  // z_j z_i (j > i) contributes mu_ij.
  bool swapped = true;
  while (swapped) {
    swapped = false;
    if (order == RewriteOrder::LeftToRight) {
      for (std::size_t k = 0; k + 1 < word.size(); ++k) {
        if (word[k] > word[k + 1]) {
          factor *= mu(word[k + 1], word[k]);
          std::swap(word[k], word[k + 1]);
          swapped = true;
        }
      }
    } else {
      for (std::size_t k = word.size() - 1; k-- > 0;) {
        if (word[k] > word[k + 1]) {
          factor *= mu(word[k + 1], word[k]);
          std::swap(word[k], word[k + 1]);
          swapped = true;
        }
      }
    }
  }
  return factor;
}

SkewPoly normal_form(const MuMatrix& mu, std::span<const RawTerm> raw, RewriteOrder order, Tolerance tol) {
  SkewPoly::Terms terms;
  for (const auto& t : raw) {
    if (!is_finite(t.coeff)) throw InputError("non-finite coefficient");
    for (auto g : t.word)
      if (g >= mu.n())
        throw InputError("generator z" + std::to_string(g + 1) + " out of range for n = " + std::to_string(mu.n()));
    auto word = t.word;
    const Scalar f = normal_order_word(mu, word, order);
    add_term(terms, monomial_of_sorted_word(mu.n(), word), t.coeff * f);
  }
  return SkewPoly(mu, std::move(terms)).pruned(tol);
}

// ---------------------------------------------------------------- SkewPoly

SkewPoly::SkewPoly(MuMatrix mu, Terms terms) : mu_(std::move(mu)), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.exponents.size() != mu_.n()) throw InputError("monomial length differs from n");
    if (!is_finite(it->second)) throw InputError("non-finite coefficient");
    it = it->second == Scalar{} ? terms_.erase(it) : std::next(it);
  }
}

SkewPoly SkewPoly::constant(MuMatrix mu, Scalar c) {
  Terms t;
  const auto n = mu.n();
  add_term(t, Monomial{std::vector<unsigned>(n, 0)}, c);
  return SkewPoly(std::move(mu), std::move(t));
}

SkewPoly SkewPoly::generator(MuMatrix mu, std::size_t i, Scalar c) {
  if (i >= mu.n()) throw InputError("generator index out of range");
  Monomial m{std::vector<unsigned>(mu.n(), 0)};
  m.exponents[i] = 1;
  Terms t;
  add_term(t, std::move(m), c);
  return SkewPoly(std::move(mu), std::move(t));
}

Scalar SkewPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar{} : it->second;
}

int SkewPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
  return d;
}

double SkewPoly::max_coefficient() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool SkewPoly::is_homogeneous(unsigned degree) const {
  for (const auto& [m, c] : terms_)
    if (m.degree() != degree) return false;
  return true;
}

SkewPoly SkewPoly::pruned(Tolerance tol) const {
  const double scale = max_coefficient();
  Terms t;
  for (const auto& [m, c] : terms_)
    if (!tol.is_zero(c, scale)) t.emplace(m, c);
  return SkewPoly(mu_, std::move(t));
}

SkewPoly SkewPoly::relabeled(std::span<const std::size_t> perm) const {
  const auto inv = inverse_permutation(perm);
  const MuMatrix target = mu_.permuted(perm);
  Terms out;
  for (const auto& [m, c] : terms_) {
    auto word = m.word();
    for (auto& g : word) g = inv[g];
    const Scalar f = normal_order_word(target, word);
    add_term(out, monomial_of_sorted_word(target.n(), word), c * f);
  }
  return SkewPoly(target, std::move(out));
}

SkewPoly operator+(const SkewPoly& p, const SkewPoly& q) {
  require_same_mu(p.mu_, q.mu_);
  auto t = p.terms_;
  for (const auto& [m, c] : q.terms_) add_term(t, m, c);
  return SkewPoly(p.mu_, std::move(t));
}

SkewPoly operator-(const SkewPoly& p, const SkewPoly& q) { return p + Scalar{-1.0} * q; }

SkewPoly operator*(Scalar s, const SkewPoly& p) {
  SkewPoly::Terms t;
  for (const auto& [m, c] : p.terms_) add_term(t, m, s * c);
  return SkewPoly(p.mu_, std::move(t));
}

SkewPoly operator*(const SkewPoly& p, const SkewPoly& q) {
  require_same_mu(p.mu_, q.mu_);
  SkewPoly::Terms t;
  for (const auto& [mp, cp] : p.terms_) {
    const auto wp = mp.word();
    for (const auto& [mq, cq] : q.terms_) {
      auto word = wp;
      const auto wq = mq.word();
      word.insert(word.end(), wq.begin(), wq.end());
      const Scalar f = normal_order_word(p.mu_, word);
      add_term(t, monomial_of_sorted_word(p.mu_.n(), word), cp * cq * f);
    }
  }
  return SkewPoly(p.mu_, std::move(t));
}

SkewPoly multiply(const SkewPoly& p, const SkewPoly& q) { return p * q; }

// ---------------------------------------------------------------- LinearForm

LinearForm::LinearForm(MuMatrix mu, std::vector<Scalar> coeffs) : mu_(std::move(mu)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != mu_.n()) throw InputError("linear form needs n coefficients");
  for (const auto& c : coeffs_)
    if (!is_finite(c)) throw InputError("non-finite coefficient");
}

LinearForm LinearForm::zero(MuMatrix mu) {
  const auto n = mu.n();
  return LinearForm(std::move(mu), std::vector<Scalar>(n));
}

bool LinearForm::is_zero(Tolerance tol) const { return tol.is_zero(max_magnitude(coeffs_)); }

LinearForm LinearForm::scaled(Scalar s) const {
  auto c = coeffs_;
  for (auto& x : c) x *= s;
  return LinearForm(mu_, std::move(c));
}

SkewPoly LinearForm::to_poly() const {
  SkewPoly::Terms t;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Monomial m{std::vector<unsigned>(coeffs_.size(), 0)};
    m.exponents[i] = 1;
    add_term(t, std::move(m), coeffs_[i]);
  }
  return SkewPoly(mu_, std::move(t));
}

LinearForm LinearForm::relabeled(std::span<const std::size_t> perm) const {
  if (perm.size() != n()) throw InputError("permutation length must equal n");
  std::vector<Scalar> c(n());
  for (std::size_t k = 0; k < n(); ++k) c[k] = coeffs_[perm[k]];
  return LinearForm(mu_.permuted(perm), std::move(c));
}

LinearForm LinearForm::lifted(const MuMatrix& target, std::span<const std::size_t> slots) const {
  if (slots.size() != n()) throw InputError("one slot per coefficient required");
  std::vector<Scalar> c(target.n());
  for (std::size_t i = 0; i < n(); ++i) {
    if (slots[i] >= target.n()) throw InputError("slot out of range");
    c[slots[i]] = coeffs_[i];
  }
  return LinearForm(target, std::move(c));
}

// ---------------------------------------------------------------- QuadraticForm

QuadraticForm::QuadraticForm(MuMatrix mu) : mu_(std::move(mu)), upper_(mu_.n() * (mu_.n() + 1) / 2) {}

QuadraticForm::QuadraticForm(MuMatrix mu, std::vector<Scalar> upper) : mu_(std::move(mu)), upper_(std::move(upper)) {
  if (upper_.size() != mu_.n() * (mu_.n() + 1) / 2) throw InputError("quadratic form needs n(n+1)/2 coefficients");
  for (const auto& c : upper_)
    if (!is_finite(c)) throw InputError("non-finite coefficient");
}

QuadraticForm QuadraticForm::from_coeffs(MuMatrix mu, const Coeffs2& c) {
  if (mu.n() != 2) throw InputError("two-generator coefficients need n = 2");
  return QuadraticForm(std::move(mu), {c.a, 2.0 * c.b, c.c});
}

QuadraticForm QuadraticForm::from_coeffs(MuMatrix mu, const Coeffs3& c) {
  if (mu.n() != 3) throw InputError("three-generator coefficients need n = 3");
  return QuadraticForm(std::move(mu), {c.a, 2.0 * c.d, 2.0 * c.e, c.b, 2.0 * c.f, c.c});
}

QuadraticForm QuadraticForm::from_poly(const SkewPoly& p, Tolerance tol) {
  const double scale = p.max_coefficient();
  std::string offending;
  QuadraticForm q(p.mu());
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() == 2) {
      const auto w = m.word();
      q.upper_[q.index(w[0], w[1])] = c;
    } else if (!tol.is_zero(c, scale)) {
      std::string name;
      for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        if (m.exponents[i] == 0) continue;
        if (!name.empty()) name += ' ';
        name += 'z' + std::to_string(i + 1);
        if (m.exponents[i] > 1) name += '^' + std::to_string(m.exponents[i]);
      }
      if (!offending.empty()) offending += ", ";
      offending += name.empty() ? "1" : name;
    }
  }
  if (!offending.empty()) throw InputError("not a homogeneous quadratic form; offending monomials: " + offending);
  return q;
}

std::size_t QuadraticForm::index(std::size_t i, std::size_t j) const {
  const auto n = mu_.n();
  if (i > j || j >= n) throw InputError("quadratic form index must satisfy i <= j < n");
  return i * n - i * (i - 1) / 2 + (j - i);
}

Scalar QuadraticForm::alpha(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }

Coeffs2 QuadraticForm::coeffs2() const {
  if (n() != 2) throw InputError("coeffs2 requires n = 2");
  return {alpha(0, 0), alpha(0, 1) / 2.0, alpha(1, 1)};
}

Coeffs3 QuadraticForm::coeffs3() const {
  if (n() != 3) throw InputError("coeffs3 requires n = 3");
  return {alpha(0, 0),       alpha(1, 1),       alpha(2, 2),
          alpha(0, 1) / 2.0, alpha(0, 2) / 2.0, alpha(1, 2) / 2.0};
}

bool QuadraticForm::is_zero(Tolerance tol) const { return tol.is_zero(max_coefficient()); }

QuadraticForm QuadraticForm::scaled(Scalar s) const {
  auto u = upper_;
  for (auto& x : u) x *= s;
  return QuadraticForm(mu_, std::move(u));
}

SkewPoly QuadraticForm::to_poly() const {
  SkewPoly::Terms t;
  const auto n = mu_.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Monomial m{std::vector<unsigned>(n, 0)};
      ++m.exponents[i];
      ++m.exponents[j];
      add_term(t, std::move(m), alpha(i, j));
    }
  }
  return SkewPoly(mu_, std::move(t));
}

QuadraticForm QuadraticForm::relabeled(std::span<const std::size_t> perm) const {
  return from_poly(to_poly().relabeled(perm), Tolerance{0.0});
}

QuadraticForm operator+(const QuadraticForm& p, const QuadraticForm& q) {
  require_same_mu(p.mu_, q.mu_);
  auto u = p.upper_;
  for (std::size_t k = 0; k < u.size(); ++k) u[k] += q.upper_[k];
  return QuadraticForm(p.mu_, std::move(u));
}

// ---------------------------------------------------------------- closed forms

QuadraticForm square_linear(const LinearForm& l) { return product_linear(l, l); }

QuadraticForm product_linear(const LinearForm& l1, const LinearForm& l2) {
  require_same_mu(l1.mu(), l2.mu());
  const auto& mu = l1.mu();
  const auto n = mu.n();
  std::vector<Scalar> u;
  u.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    u.push_back(l1[i] * l2[i]);
    for (std::size_t j = i + 1; j < n; ++j) u.push_back(l1[i] * l2[j] + mu(i, j) * l1[j] * l2[i]);
  }
  return QuadraticForm(mu, std::move(u));
}

bool is_twist_of_polynomial_ring(const MuMatrix& mu, Tolerance tol) {
  const auto n = mu.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Scalar rhs = mu(i, j) * mu(j, k);
        if (!tol.equal(mu(i, k), rhs, std::max(std::abs(mu(i, k)), std::abs(rhs)))) return false;
      }
  return true;
}

QuadraticForm tau_star_product(const LinearForm& r1, const LinearForm& r2) {
  require_same_mu(r1.mu(), r2.mu());
  const auto& mu = r1.mu();
  if (mu.n() != 2) throw InputError("the twist product is defined for n = 2 only");
  const Scalar m12 = mu(0, 1);
  // tau(r2) in the commutative ring.
  const Scalar t1 = m12 * r2[0];
  const Scalar t2 = r2[1];
  // Commutative product r1 * tau(r2) on x1^2, x1x2, x2^2.
  const Scalar x11 = r1[0] * t1;
  const Scalar x12 = r1[0] * t2 + r1[1] * t1;
  const Scalar x22 = r1[1] * t2;
  // z1 * z1 = z1 tau(z1) = mu_12 x1^2; z1 * z2 = x1x2; z2 * z2 = x2^2.
  return QuadraticForm(mu, {x11 / m12, x12, x22});
}

}  // namespace skewform
