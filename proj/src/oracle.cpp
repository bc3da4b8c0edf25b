#include "skewform/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "skewform/errors.hpp"
#include "skewform/form_parser.hpp"

namespace skewform::oracle {

namespace {

// Exact algebraic identities are checked at this relative level; they only
// carry rounding error.
constexpr double kIdentityTol = 1e-10;

SkewPoly expand_by_multiplication(const Factorization& f) {
  auto sq = [](const LinearForm& l) {
    const auto p = l.to_poly();
    return multiply(p, p);
  };
  if (std::holds_alternative<ZeroForm>(f.shape)) return SkewPoly(f.mu);
  if (const auto* s = std::get_if<Square>(&f.shape)) return sq(s->l);
  if (const auto* p = std::get_if<Product>(&f.shape)) return multiply(p->l1.to_poly(), p->l2.to_poly());
  const auto& s = std::get<SumOfProducts>(f.shape);
  return multiply(s.l1.to_poly(), s.l2.to_poly()) + sq(s.l3);
}

double relative_gap(const SkewPoly& x, const SkewPoly& y) {
  return (x - y).max_coefficient() / std::max(1.0, std::max(x.max_coefficient(), y.max_coefficient()));
}

double relative_gap(Scalar x, Scalar y) { return std::abs(x - y) / std::max(1.0, std::max(std::abs(x), std::abs(y))); }

std::string mu_text(const MuMatrix& mu) {
  std::string s = "mu{";
  for (std::size_t i = 0; i < mu.n(); ++i)
    for (std::size_t j = i + 1; j < mu.n(); ++j) {
      if (s.size() > 3) s += ", ";
      s += std::to_string(i + 1) + std::to_string(j + 1) + "=" + format_scalar(mu(i, j));
    }
  return s + "}";
}

std::string snapshot(const QuadraticForm& q) { return mu_text(q.mu()) + " Q=" + print(q); }

QuadraticForm form_of(const SkewPoly& p) { return QuadraticForm::from_poly(p, Tolerance{0.0}); }

QuadraticForm square_of(const LinearForm& l) {
  const auto p = l.to_poly();
  return form_of(multiply(p, p));
}

QuadraticForm product_of(const LinearForm& l1, const LinearForm& l2) {
  return form_of(multiply(l1.to_poly(), l2.to_poly()));
}

CaseReport report(std::uint64_t seed, std::string description, double residual, double threshold,
                  std::string payload = {}) {
  return {seed, std::move(description), residual <= threshold, residual, std::move(payload)};
}

CaseReport boolean_report(std::uint64_t seed, std::string description, bool ok, std::string payload = {}) {
  return {seed, std::move(description), ok, ok ? 0.0 : 1.0, std::move(payload)};
}

// Random polynomial of degree <= max_degree through the rewriting engine.
SkewPoly random_poly(Rng& rng, const MuMatrix& mu, unsigned max_degree, std::size_t terms) {
  std::vector<RawTerm> raw;
  for (std::size_t t = 0; t < terms; ++t) {
    RawTerm r{rng.scalar(), {}};
    const auto len = rng.below(max_degree + 1);
    for (std::size_t k = 0; k < len; ++k) r.word.push_back(rng.below(mu.n()));
    raw.push_back(std::move(r));
  }
  return normal_form(mu, raw);
}

// Linear form with first coefficient exactly 1.
LinearForm random_monic(Rng& rng, const MuMatrix& mu) {
  auto l = random_linear(rng, mu);
  std::vector<Scalar> c(l.coeffs().begin(), l.coeffs().end());
  c[0] = 1.0;
  return LinearForm(mu, std::move(c));
}

MuSymmetricMatrix random_mu_symmetric(Rng& rng, const MuMatrix& mu) {
  const auto n = mu.n();
  std::vector<Scalar> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i * n + i] = rng.scalar();
    for (std::size_t j = i + 1; j < n; ++j) {
      e[i * n + j] = rng.scalar();
      e[j * n + i] = mu(j, i) * e[i * n + j];
    }
  }
  return MuSymmetricMatrix(mu, std::move(e));
}

double matrix_gap(const MuSymmetricMatrix& x, const MuSymmetricMatrix& y) {
  double gap = 0.0;
  for (std::size_t k = 0; k < x.entries().size(); ++k) gap = std::max(gap, std::abs(x.entries()[k] - y.entries()[k]));
  return gap / std::max(1.0, std::max(x.max_entry(), y.max_entry()));
}

double form_gap(const QuadraticForm& x, const QuadraticForm& y) { return relative_gap(x.to_poly(), y.to_poly()); }

MuMode any_mu_mode(Rng& rng) {
  constexpr std::array modes{MuMode::Generic,   MuMode::Generic,   MuMode::Commutative, MuMode::Twist,
                             MuMode::M12NegOne, MuMode::M13NegOne, MuMode::BothNegOne,  MuMode::Special};
  return modes[rng.below(modes.size())];
}

double scale_of(const QuadraticForm& q) { return std::max(1.0, q.max_coefficient()); }

// ---------------------------------------------------------------- properties

using Property = std::function<CaseReport(std::uint64_t, Tolerance)>;

struct NamedProperty {
  const char* name;
  Property run;
};

CaseReport prop_confluence(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(3), MuMode::Generic);
  std::vector<RawTerm> raw;
  for (int t = 0; t < 4; ++t) {
    RawTerm r{rng.scalar(), {}};
    const auto len = rng.below(5);
    for (std::size_t k = 0; k < len; ++k) r.word.push_back(rng.below(mu.n()));
    raw.push_back(std::move(r));
  }
  const auto l2r = normal_form(mu, raw, RewriteOrder::LeftToRight);
  const auto r2l = normal_form(mu, raw, RewriteOrder::RightToLeft);
  return report(seed, "rewrite orders agree", relative_gap(l2r, r2l), kIdentityTol, mu_text(mu));
}

CaseReport prop_associativity(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(2), MuMode::Generic);
  const auto p = random_poly(rng, mu, 2, 3);
  const auto q = random_poly(rng, mu, 2, 3);
  const auto r = random_poly(rng, mu, 2, 3);
  return report(seed, "(pq)r = p(qr)", relative_gap((p * q) * r, p * (q * r)), kIdentityTol,
                mu_text(mu) + " p=" + print(p) + " q=" + print(q) + " r=" + print(r));
}

CaseReport prop_relation(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(3), MuMode::Generic);
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.n(); ++i)
    for (std::size_t j = i + 1; j < mu.n(); ++j) {
      const RawTerm swapped{1.0, {j, i}};
      const RawTerm ordered{mu(i, j), {i, j}};
      worst = std::max(worst, relative_gap(normal_form(mu, std::span(&swapped, 1)), normal_form(mu, std::span(&ordered, 1))));
    }
  return report(seed, "z_j z_i = mu_ij z_i z_j", worst, kIdentityTol, mu_text(mu));
}

CaseReport prop_commutative_multiply(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = MuMatrix::identity(2 + rng.below(3));
  const auto p = random_poly(rng, mu, 2, 3);
  const auto q = random_poly(rng, mu, 2, 3);
  // Commutative product by exponent addition.
  SkewPoly::Terms expected;
  for (const auto& [mp, cp] : p.terms())
    for (const auto& [mq, cq] : q.terms()) {
      Monomial m = mp;
      for (std::size_t k = 0; k < m.exponents.size(); ++k) m.exponents[k] += mq.exponents[k];
      expected[m] += cp * cq;
    }
  return report(seed, "mu = 1 multiplication is commutative multiplication",
                relative_gap(p * q, SkewPoly(mu, std::move(expected))), kIdentityTol);
}

CaseReport prop_square_linear(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(3), any_mu_mode(rng));
  const auto l = random_linear(rng, mu);
  return report(seed, "square_linear = L*L", form_gap(square_linear(l), square_of(l)), kIdentityTol,
                mu_text(mu) + " L=" + print(l));
}

CaseReport prop_product_linear(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(3), any_mu_mode(rng));
  const auto l1 = random_linear(rng, mu);
  const auto l2 = random_linear(rng, mu);
  return report(seed, "product_linear = L1*L2", form_gap(product_linear(l1, l2), product_of(l1, l2)), kIdentityTol,
                mu_text(mu) + " L1=" + print(l1) + " L2=" + print(l2));
}

CaseReport prop_tau_star(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2, any_mu_mode(rng));
  const auto r1 = random_linear(rng, mu);
  const auto r2 = random_linear(rng, mu);
  return report(seed, "twist product = product in S", form_gap(tau_star_product(r1, r2), product_of(r1, r2)),
                kIdentityTol, mu_text(mu));
}

CaseReport prop_form_round_trip(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(2), any_mu_mode(rng));
  const auto q = random_form(rng, mu);
  return report(seed, "matrix_to_form(form_to_matrix(Q)) = Q", form_gap(matrix_to_form(form_to_matrix(q), tol), q),
                kIdentityTol, snapshot(q));
}

CaseReport prop_matrix_round_trip(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(2), any_mu_mode(rng));
  const auto m = random_mu_symmetric(rng, mu);
  return report(seed, "form_to_matrix(matrix_to_form(M)) = M", matrix_gap(form_to_matrix(matrix_to_form(m, tol)), m),
                kIdentityTol, mu_text(mu));
}

CaseReport prop_mu_one_symmetric(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = MuMatrix::identity(2 + rng.below(2));
  const auto q = random_form(rng, mu);
  const auto m = form_to_matrix(q);
  double gap = 0.0;
  for (std::size_t i = 0; i < mu.n(); ++i)
    for (std::size_t j = 0; j < mu.n(); ++j) gap = std::max(gap, std::abs(m(i, j) - m(j, i)));
  // Classical z^T M z expansion of a random symmetric matrix.
  const auto s = random_mu_symmetric(rng, mu);
  std::vector<Scalar> upper;
  for (std::size_t i = 0; i < mu.n(); ++i)
    for (std::size_t j = i; j < mu.n(); ++j) upper.push_back(i == j ? s(i, i) : s(i, j) + s(j, i));
  gap = std::max(gap, form_gap(matrix_to_form(s, tol), QuadraticForm(mu, upper)));
  return report(seed, "mu = 1 gives symmetric matrices and z^T M z", gap, kIdentityTol, snapshot(q));
}

CaseReport prop_linearity(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(2), any_mu_mode(rng));
  const auto q1 = random_form(rng, mu);
  const auto q2 = random_form(rng, mu);
  const Scalar lambda = rng.scalar(2.0);
  const auto lhs = form_to_matrix(q1.scaled(lambda) + q2);
  const auto m1 = form_to_matrix(q1);
  const auto m2 = form_to_matrix(q2);
  std::vector<Scalar> sum(lhs.entries().size());
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = lambda * m1.entries()[k] + m2.entries()[k];
  const MuSymmetricMatrix rhs(mu, sum);
  double gap = matrix_gap(lhs, rhs);
  gap = std::max(gap, form_gap(matrix_to_form(rhs, tol), q1.scaled(lambda) + q2));
  return report(seed, "correspondence is linear", gap, kIdentityTol, mu_text(mu));
}

CaseReport prop_sextic_zero_set(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, any_mu_mode(rng));
  // Planted factorable form with a = 1.
  const auto q = product_of(random_monic(rng, mu), random_monic(rng, mu));
  const auto m = form_to_matrix(q);
  const double s = scale_of(q);
  const double sx = std::abs(sextic(m)) / std::pow(s, 6);
  const bool d8_zero = tol.is_zero(mu_det_D8_any_sign(m, tol).value, s, 2);
  auto r = report(seed, "sextic vanishes on factorable forms", sx, 1e-6, snapshot(q));
  if (!d8_zero) {
    r.passed = false;
    r.description = "no D8 sign pair vanishes on a factorable form";
  }
  return r;
}

CaseReport prop_sextic_product(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, any_mu_mode(rng));
  const auto m = form_to_matrix(random_form(rng, mu));
  Scalar prod{1.0};
  for (const auto& v : mu_det_D8_all_signs(m, tol)) prod *= v.value;
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const Scalar m1213 = mu(0, 1) * mu(0, 2);
  const Scalar rhs = a * a * sextic(m) / (m1213 * m1213);
  return report(seed, "prod of four D8 = a^2 sextic / (mu12 mu13)^2", relative_gap(prod, rhs), 1e-8, mu_text(mu));
}

CaseReport prop_homogeneity(std::uint64_t seed, Tolerance) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, any_mu_mode(rng));
  const auto m = form_to_matrix(random_form(rng, mu));
  const Scalar lambda = rng.scalar(2.0);
  const auto ml = m.scaled(lambda);
  const auto d = mu_minors_3(m);
  const auto dl = mu_minors_3(ml);
  double gap = 0.0;
  for (std::size_t k = 0; k < 6; ++k) gap = std::max(gap, relative_gap(dl[k], lambda * lambda * d[k]));
  gap = std::max(gap, relative_gap(mu_det_D7(ml), std::pow(lambda, 6) * mu_det_D7(m)));
  return report(seed, "D1..D6 degree 2, D7 degree 6", gap, kIdentityTol, mu_text(mu));
}

CaseReport prop_twist(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, MuMode::Twist);
  const auto m = form_to_matrix(random_form(rng, mu));
  double gap = relative_gap(mu_det_D7(m), twist_simplified_D7(m, tol));
  for (const auto& sp : kAllSignPairs)
    gap = std::max(gap, relative_gap(mu_det_D8(m, sp, tol).value, twist_simplified_D8(m, sp, tol)));
  return report(seed, "twist forms of D7 and D8", gap, kIdentityTol, mu_text(mu));
}

CaseReport prop_mu_one_determinant(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = MuMatrix::identity(3);
  const bool planted = rng.chance(0.5);
  const auto q = planted ? product_of(random_monic(rng, mu), random_monic(rng, mu))
                         : QuadraticForm::from_coeffs(mu, Coeffs3{1.0, rng.scalar(), rng.scalar(), rng.scalar(),
                                                                  rng.scalar(), rng.scalar()});
  const auto m = form_to_matrix(q);
  const auto [a, b, c, d, e, f] = m.coeffs3();
  const Scalar det = a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
  const Scalar lhs = (d * e - f) * (d * e - f) - (d * d - b) * (e * e - c);
  const double s = scale_of(q);
  const bool d8_zero = tol.is_zero(mu_det_D8_any_sign(m, tol).value, s, 2);
  const bool det_zero = tol.is_zero(det, s, 3);
  const double gap = relative_gap(lhs, -det);
  CaseReport r = report(seed, "mu = 1, a = 1: D8 vanishes iff det vanishes", gap, kIdentityTol, snapshot(q));
  if (d8_zero != det_zero || (planted && !d8_zero)) {
    r.passed = false;
    r.max_residual = std::max(r.max_residual, 1.0);
  }
  return r;
}

CaseReport prop_minors_on_squares(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, any_mu_mode(rng));
  const auto l = random_linear(rng, mu);
  const auto q = square_of(l);
  const auto minors = mu_minors_3(form_to_matrix(q));
  const double s = scale_of(q);
  std::string failing;
  double worst = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    const double v = std::abs(minors[k]) / (s * s);
    worst = std::max(worst, v);
    if (v > tol.tol) failing += (failing.empty() ? "" : ",") + std::string("D") + std::to_string(k + 1);
  }
  auto r = report(seed, failing.empty() ? "minors vanish on squares" : "minors vanish on squares: " + failing + " nonzero",
                  worst, tol.tol, snapshot(q));
  if (r.passed) {
    const auto sq = square_3(q, tol);
    if (!sq) {
      r.passed = false;
      r.description = "square_3 found no root of a planted square";
    } else {
      r.max_residual = std::max(r.max_residual, form_gap(square_of(*sq), q));
      r.passed = r.max_residual <= 1e-8;
    }
  }
  return r;
}

CaseReport prop_witness_round_trip(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.below(2);
  const auto mu = random_mu(rng, n, any_mu_mode(rng));
  InstanceSpec spec{n, static_cast<PlantMode>(1 + rng.below(4)), MuMode::Generic, 1.0, 0};
  auto inst = InstanceStream(rng.next(), spec).next();
  const auto q = QuadraticForm(mu, std::vector<Scalar>(inst.q.upper().begin(), inst.q.upper().end()));
  double worst = 0.0;
  if (q.is_zero(tol)) return report(seed, "witnesses re-expand", 0.0, 1e-8);
  if (n == 2) {
    for (const auto& f : factor_2(q, tol)) worst = std::max(worst, verify_factorization(q, f).max_residual);
  } else {
    worst = verify_factorization(q, decompose_3(q, tol)).max_residual;
    if (auto f = factor_3(q, tol)) worst = std::max(worst, verify_factorization(q, *f).max_residual);
  }
  return report(seed, "witnesses re-expand", worst, 1e-8, snapshot(q));
}

CaseReport prop_planted_rank(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, any_mu_mode(rng));
  const bool square = rng.chance(0.5);
  const auto q = square ? square_of(random_linear(rng, mu)) : product_of(random_linear(rng, mu), random_linear(rng, mu));
  const int r = mu_rank_3(q, tol).value;
  const bool ok = square ? r == 1 : (r == 1 || r == 2);
  return boolean_report(seed, square ? "planted square has rank 1" : "planted product has rank <= 2", ok,
                        snapshot(q) + " rank=" + std::to_string(r));
}

CaseReport prop_scalar_invariance(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.below(2);
  InstanceSpec spec{n, static_cast<PlantMode>(1 + rng.below(4)), any_mu_mode(rng), 1.0, 0};
  const auto inst = InstanceStream(rng.next(), spec).next();
  Scalar lambda = std::polar(std::exp(rng.uniform(std::log(0.1), std::log(10.0))), rng.uniform(0.0, 2 * std::numbers::pi));
  const int r1 = *mu_rank_general(inst.q, tol);
  const int r2 = *mu_rank_general(inst.q.scaled(lambda), tol);
  return boolean_report(seed, "rank(lambda Q) = rank(Q)", r1 == r2,
                        snapshot(inst.q) + " ranks " + std::to_string(r1) + "/" + std::to_string(r2));
}

CaseReport prop_commutative_rank(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.below(2);
  const auto mode = static_cast<PlantMode>(rng.below(n == 3 ? 4 : 3));
  const auto inst = InstanceStream(rng.next(), InstanceSpec{n, mode, MuMode::Commutative, 1.0, 0}).next();
  const int mr = *mu_rank_general(inst.q, tol);
  const int cr = classical_rank(form_to_matrix(inst.q), tol);
  const bool ok = mr == cr && (!inst.truth.exact_rank || *inst.truth.exact_rank == mr);
  return boolean_report(seed, "mu = 1: mu-rank = classical rank", ok,
                        snapshot(inst.q) + " mu-rank=" + std::to_string(mr) + " classical=" + std::to_string(cr));
}

CaseReport prop_n2_uniqueness(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2, any_mu_mode(rng));
  Coeffs2 c{rng.scalar(), rng.scalar(), rng.scalar()};
  if (rng.chance(0.5)) c.b = principal_sqrt(mu(0, 1) * c.a * c.c);
  const auto q = QuadraticForm::from_coeffs(mu, c);
  const auto classes = factor_2(q, tol);
  const bool unique = unique_factor_2(q, tol);
  bool ok = (classes.size() == 1 || classes.size() == 2) && (classes.size() == 1) == unique;
  double worst = 0.0;
  for (const auto& f : classes) worst = std::max(worst, verify_factorization(q, f).max_residual);
  auto r = report(seed, "n = 2: one or two classes, one iff b^2 = mu_12 ac", worst, 1e-8, snapshot(q));
  r.passed = r.passed && ok;
  return r;
}

CaseReport prop_factoring_equivalence(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  InstanceSpec spec{3, static_cast<PlantMode>(1 + rng.below(4)), any_mu_mode(rng), 1.0, 0};
  const auto inst = InstanceStream(rng.next(), spec).next();
  const auto& q = inst.q;
  const int r = mu_rank_3(q, tol).value;
  const bool product = factor_3(q, tol).has_value();
  const bool square = square_3(q, tol).has_value();
  const bool ok = (r <= 2) == product && (r == 1) == square;
  return boolean_report(seed, "rank <= 2 iff product witness, rank 1 iff square witness", ok,
                        snapshot(q) + " rank=" + std::to_string(r));
}

CaseReport prop_parser_round_trip(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 1 + rng.below(4), MuMode::Generic);
  const auto p = random_poly(rng, mu, 2, 1 + rng.below(5));
  const auto text = print(p);
  return report(seed, "parse(print(p)) = p", relative_gap(parse(text, mu, tol), p), 1e-12, text);
}

CaseReport prop_normal_ordering(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 2 + rng.below(3), MuMode::Generic);
  std::vector<RawTerm> raw;
  std::string text;
  for (int t = 0; t < 3; ++t) {
    RawTerm r{std::round(rng.uniform(1.0, 9.0)), {}};
    const auto len = rng.below(4);
    if (!text.empty()) text += " + ";
    text += format_number(r.coeff.real());
    for (std::size_t k = 0; k < len; ++k) {
      r.word.push_back(rng.below(mu.n()));
      text += " z" + std::to_string(r.word.back() + 1);
    }
    raw.push_back(std::move(r));
  }
  return report(seed, "parser normal-orders words", relative_gap(parse(text, mu, tol), normal_form(mu, raw)),
                kIdentityTol, text);
}

CaseReport prop_factorization_text(std::uint64_t seed, Tolerance tol) {
  Rng rng(seed);
  const auto mu = random_mu(rng, 3, any_mu_mode(rng));
  const auto q = random_form(rng, mu);
  const auto f = decompose_3(q, tol);
  const auto text = print(f);
  return report(seed, "printed factorization parses back to Q", relative_gap(parse(text, mu, tol), q.to_poly()), 1e-8,
                text);
}

CaseReport prop_classical_rank_golden(std::uint64_t seed, Tolerance tol) {
  struct Golden {
    std::size_t n;
    std::vector<Scalar> m;
    int rank;
  };
  static const std::vector<Golden> golden{
      {2, {0, 0, 0, 0}, 0},
      {2, {1, 1, 1, 1}, 1},
      {2, {0, 0.5, 0.5, 0}, 2},
      {2, {1, 0, 0, 4}, 2},
      {3, {0, 0, 0, 0, 0, 0, 0, 0, 0}, 0},
      {3, {4, 2, 16, 2, 1, 8, 16, 8, 64}, 1},
      {3, {0, 0.5, 0, 0.5, 0, 0, 0, 0, 0}, 2},
      {3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, 3},
      {3, {1, 1, 1.5, 1, 1, 1.5, 1.5, 1.5, 2}, 2},
  };
  bool ok = true;
  std::string bad;
  for (const auto& g : golden) {
    const int r = classical_rank(MuSymmetricMatrix(MuMatrix::identity(g.n), g.m), tol);
    if (r != g.rank) {
      ok = false;
      bad += " expected " + std::to_string(g.rank) + " got " + std::to_string(r);
    }
  }
  return boolean_report(seed, "classical rank golden set", ok, bad);
}

const std::vector<NamedProperty>& properties() {
  static const std::vector<NamedProperty> props{
      {"skew_ring.confluence", prop_confluence},
      {"skew_ring.associativity", prop_associativity},
      {"skew_ring.relation", prop_relation},
      {"skew_ring.commutative_reduction", prop_commutative_multiply},
      {"skew_ring.square_linear", prop_square_linear},
      {"skew_ring.product_linear", prop_product_linear},
      {"skew_ring.tau_star_product", prop_tau_star},
      {"mu_correspond.form_round_trip", prop_form_round_trip},
      {"mu_correspond.matrix_round_trip", prop_matrix_round_trip},
      {"mu_correspond.mu_one_reduction", prop_mu_one_symmetric},
      {"mu_correspond.linearity", prop_linearity},
      {"mu_invariants.sextic_zero_set", prop_sextic_zero_set},
      {"mu_invariants.sextic_d8_product", prop_sextic_product},
      {"mu_invariants.homogeneity", prop_homogeneity},
      {"mu_invariants.twist_consistency", prop_twist},
      {"mu_invariants.mu_one_determinant", prop_mu_one_determinant},
      {"mu_invariants.minors_on_squares", prop_minors_on_squares},
      {"rank_factor.witness_round_trip", prop_witness_round_trip},
      {"rank_factor.planted_rank", prop_planted_rank},
      {"rank_factor.scalar_invariance", prop_scalar_invariance},
      {"rank_factor.commutative_reduction", prop_commutative_rank},
      {"rank_factor.n2_uniqueness", prop_n2_uniqueness},
      {"rank_factor.factoring_equivalence", prop_factoring_equivalence},
      {"form_parser.round_trip", prop_parser_round_trip},
      {"form_parser.normal_ordering", prop_normal_ordering},
      {"form_parser.factorization_text", prop_factorization_text},
      {"oracle.classical_rank_golden", prop_classical_rank_golden},
  };
  return props;
}

}  // namespace

// ---------------------------------------------------------------- public

CaseReport verify_factorization(const QuadraticForm& q, const Factorization& f, double threshold) {
  require_same_mu(q.mu(), f.mu);
  const SkewPoly e = expand_by_multiplication(f);
  const double residual = (q.to_poly() - e).max_coefficient() / std::max(1.0, q.max_coefficient());
  return report(0, "verify " + print(f), residual, threshold, snapshot(q));
}

int classical_rank(const MuSymmetricMatrix& m, Tolerance tol) {
  const auto n = m.n();
  if (!m.mu().approx_equal(MuMatrix::identity(n), tol)) throw InputError("classical rank needs mu = 1");
  Eigen::MatrixXcd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!tol.equal(m(i, j), m(j, i), m.max_entry())) throw InputError("classical rank needs a symmetric matrix");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= tol.tol) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol.tol * sv(0)) ++r;
  return r;
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

Scalar Rng::scalar(double magnitude) { return {uniform(-magnitude, magnitude), uniform(-magnitude, magnitude)}; }

MuMatrix random_mu(Rng& rng, std::size_t n, MuMode mode) {
  static constexpr std::array<double, 7> special{1.0, -1.0, 2.0, 3.0, 0.5, 1.0 / 3.0, -2.0};
  auto generic = [&]() -> Scalar {
    if (rng.chance(0.2)) return special[rng.below(special.size())];
    return std::polar(std::exp(rng.uniform(-std::numbers::ln2, std::numbers::ln2)),
                      rng.uniform(0.0, 2.0 * std::numbers::pi));
  };
  std::vector<Scalar> upper;
  upper.reserve(n * (n - 1) / 2);
  if (mode == MuMode::Twist) {
    std::vector<Scalar> step(n);
    for (std::size_t k = 0; k + 1 < n; ++k) step[k] = generic();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Scalar v{1.0};
        for (std::size_t k = i; k < j; ++k) v *= step[k];
        upper.push_back(v);
      }
    return MuMatrix::from_upper(n, upper);
  }
  for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) {
    switch (mode) {
      case MuMode::Commutative: upper.push_back(1.0); break;
      case MuMode::Special: upper.push_back(special[rng.below(special.size())]); break;
      default: upper.push_back(generic()); break;
    }
  }
  // Upper entries are ordered mu_12, mu_13, ...: index 0 is mu_12, index 1 is mu_13.
  if (n >= 3) {
    if (mode == MuMode::EqualM12M13) upper[1] = upper[0];
    if (mode == MuMode::M12NegOne || mode == MuMode::BothNegOne) upper[0] = -1.0;
    if (mode == MuMode::M13NegOne || mode == MuMode::BothNegOne) upper[1] = -1.0;
  } else if (n == 2 && (mode == MuMode::M12NegOne || mode == MuMode::BothNegOne)) {
    upper[0] = -1.0;
  }
  return MuMatrix::from_upper(n, upper);
}

LinearForm random_linear(Rng& rng, const MuMatrix& mu, double magnitude) {
  std::vector<Scalar> c(mu.n());
  for (auto& x : c) x = rng.scalar(magnitude);
  return LinearForm(mu, std::move(c));
}

QuadraticForm random_form(Rng& rng, const MuMatrix& mu, double magnitude) {
  std::vector<Scalar> u(mu.n() * (mu.n() + 1) / 2);
  for (auto& x : u) x = rng.scalar(magnitude);
  return QuadraticForm(mu, std::move(u));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

InstanceStream::InstanceStream(std::uint64_t seed, InstanceSpec spec) : seed_(seed), spec_(spec) {
  if (spec_.n == 0) throw InputError("instance spec needs n >= 1");
  if (!(spec_.magnitude > 0.0)) throw InputError("instance spec needs a positive magnitude");
  if (spec_.zero_mask >> (spec_.n * (spec_.n + 1) / 2)) throw InputError("zero mask addresses missing coefficients");
}

Instance InstanceStream::next() {
  const std::uint64_t s = derive_seed(seed_, index_++);
  Rng rng(s);
  const auto mu = random_mu(rng, spec_.n, spec_.mu_mode);
  const double m = spec_.magnitude;
  const bool commutative = spec_.mu_mode == MuMode::Commutative;
  PlantedTruth truth;
  truth.mode = spec_.mode;
  QuadraticForm q(mu);
  switch (spec_.mode) {
    case PlantMode::Zero:
      truth.exact_rank = 0;
      truth.max_rank = 0;
      break;
    case PlantMode::Square: {
      auto l = random_linear(rng, mu, m);
      q = square_of(l);
      truth.exact_rank = 1;
      truth.max_rank = 1;
      truth.factors = {std::move(l)};
      break;
    }
    case PlantMode::Product: {
      auto l1 = random_linear(rng, mu, m);
      auto l2 = random_linear(rng, mu, m);
      q = product_of(l1, l2);
      truth.max_rank = 2;
      if (commutative) truth.exact_rank = 2;
      truth.factors = {std::move(l1), std::move(l2)};
      break;
    }
    case PlantMode::SumOfProducts: {
      auto l1 = random_linear(rng, mu, m);
      auto l2 = random_linear(rng, mu, m);
      auto l3 = random_linear(rng, mu, m);
      q = form_of(multiply(l1.to_poly(), l2.to_poly()) + multiply(l3.to_poly(), l3.to_poly()));
      truth.max_rank = std::min<int>(3, static_cast<int>(spec_.n));
      if (commutative) truth.exact_rank = truth.max_rank;
      truth.factors = {std::move(l1), std::move(l2), std::move(l3)};
      break;
    }
    case PlantMode::Dense: {
      const auto dense = random_form(rng, mu, m);
      std::vector<Scalar> u(dense.upper().begin(), dense.upper().end());
      for (std::size_t k = 0; k < u.size(); ++k)
        if (spec_.zero_mask & (1u << k)) u[k] = 0.0;
      q = QuadraticForm(mu, std::move(u));
      truth.max_rank = std::min<int>(3, static_cast<int>(spec_.n));
      break;
    }
  }
  return {s, mu, std::move(q), std::move(truth)};
}

std::vector<std::string> property_names() {
  std::vector<std::string> names;
  for (const auto& p : properties()) names.emplace_back(p.name);
  return names;
}

SelftestSummary selftest(std::uint64_t seed, std::size_t count, Tolerance tol) {
  SelftestSummary summary;
  summary.seed = seed;
  summary.cases = count;
  const auto& props = properties();
  for (const auto& p : props) summary.properties.push_back({p.name, 0, 0});
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t case_seed = derive_seed(seed, k);
    for (std::size_t i = 0; i < props.size(); ++i) {
      const std::uint64_t s = derive_seed(case_seed, i);
      CaseReport r;
      try {
        r = props[i].run(s, tol);
      } catch (const std::exception& ex) {
        r = {s, std::string("exception: ") + ex.what(), false, 1.0, {}};
      }
      ++summary.properties[i].checked;
      if (!r.passed) {
        ++summary.properties[i].failed;
        r.seed = s;
        r.description = std::string(props[i].name) + ": " + r.description;
        summary.failures.push_back(std::move(r));
      }
    }
  }
  std::sort(summary.failures.begin(), summary.failures.end(), [](const CaseReport& x, const CaseReport& y) {
    return std::tie(x.seed, x.description) < std::tie(y.seed, y.description);
  });
  return summary;
}

}  // namespace skewform::oracle
