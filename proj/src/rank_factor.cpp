#include "skewform/rank_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "skewform/errors.hpp"

namespace skewform {

namespace {

// Witnesses are rejected as bugs only when the residual is far outside
// rounding noise; the acceptance thresholds are much tighter than this.
double verify_threshold(Tolerance tol) { return std::sqrt(std::max(tol.tol, 1e-300)); }

struct Prepared {
  QuadraticForm form;
  Scalar normalizer;  // original = normalizer * form
};

// Divide by the coefficient of largest magnitude, then snap |x| <= tol to 0.
Prepared normalize_max(const QuadraticForm& q, Tolerance tol) {
  const auto u = q.upper();
  const auto it = std::max_element(u.begin(), u.end(), [](Scalar x, Scalar y) { return std::abs(x) < std::abs(y); });
  const Scalar k = *it;
  std::vector<Scalar> v(u.begin(), u.end());
  for (auto& x : v) {
    x /= k;
    if (tol.is_zero(x)) x = 0.0;
  }
  *(v.begin() + (it - u.begin())) = 1.0;
  return {QuadraticForm(q.mu(), std::move(v)), k};
}

// As normalize_max, then divide by a when a != 0 so a is exactly 0 or 1.
Prepared prepare3(const QuadraticForm& q, Tolerance tol) {
  auto p = normalize_max(q, tol);
  const Scalar a = p.form.alpha(0, 0);
  if (a == Scalar{}) return p;
  std::vector<Scalar> v(p.form.upper().begin(), p.form.upper().end());
  for (auto& x : v) x /= a;
  v[0] = 1.0;
  return {QuadraticForm(q.mu(), std::move(v)), p.normalizer * a};
}

double form_scale(const QuadraticForm& q) { return std::max(1.0, q.max_coefficient()); }

LinearForm linear(const MuMatrix& mu, std::vector<Scalar> c) { return LinearForm(mu, std::move(c)); }

double residual_of(const QuadraticForm& q, const Factorization& f) { return scaled_residual(q, expand(f)); }

void require_verified(const Factorization& f, Tolerance tol, const char* what) {
  if (!(f.residual <= verify_threshold(tol)))
    throw VerificationError(std::string(what) + ": witness failed re-expansion (residual " +
                            std::to_string(f.residual) + ")");
}

Factorization make_square(const QuadraticForm& q, LinearForm l, Tolerance tol) {
  Factorization f{q.mu(), Square{canonical_sign(l, tol)}, {}, {}, 0.0};
  f.residual = residual_of(q, f);
  return f;
}

Factorization make_product(const QuadraticForm& q, const LinearForm& l1, const LinearForm& l2, Tolerance tol) {
  auto [m1, k] = make_monic(l1, tol);
  Factorization f{q.mu(), Product{std::move(m1), l2.scaled(k)}, {}, {}, 0.0};
  f.residual = residual_of(q, f);
  return f;
}

Factorization make_sum(const QuadraticForm& q, const LinearForm& l1, const LinearForm& l2, const LinearForm& l3,
                       Tolerance tol) {
  auto [m2, k] = make_monic(l2, tol);
  Factorization f{q.mu(), SumOfProducts{l1.scaled(k), std::move(m2), canonical_sign(l3, tol)}, {}, {}, 0.0};
  f.residual = residual_of(q, f);
  return f;
}

template <typename Candidates>
auto best_by_residual(Candidates& cands) {
  return std::min_element(cands.begin(), cands.end(),
                          [](const auto& x, const auto& y) { return x.residual < y.residual; });
}

void require_n(const QuadraticForm& q, std::size_t n, const char* what) {
  if (q.n() != n) throw InputError(std::string(what) + " requires n = " + std::to_string(n));
}

MuMatrix restrict_mu(const MuMatrix& mu, std::size_t i, std::size_t j) {
  const Scalar up = mu(i, j);
  return MuMatrix::from_upper(2, std::span<const Scalar>(&up, 1));
}

// Two-generator form on generators (i, j) of q.
QuadraticForm sub_form(const QuadraticForm& q, std::size_t i, std::size_t j) {
  return QuadraticForm(restrict_mu(q.mu(), i, j), {q.alpha(i, i), q.alpha(i, j), q.alpha(j, j)});
}

std::vector<std::size_t> inverse(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = k;
  return inv;
}

struct Triple {
  LinearForm l1, l2, l3;
};

Triple relabel_back(const Triple& t, std::span<const std::size_t> perm) {
  const auto inv = inverse(perm);
  return {t.l1.relabeled(inv), t.l2.relabeled(inv), t.l3.relabeled(inv)};
}

}  // namespace

// ---------------------------------------------------------------- helpers

std::pair<LinearForm, Scalar> make_monic(const LinearForm& l, Tolerance tol) {
  const double scale = max_magnitude(l.coeffs());
  for (std::size_t i = 0; i < l.n(); ++i) {
    if (scale > 0.0 && std::abs(l[i]) > tol.tol * scale) {
      const Scalar k = l[i];
      auto c = std::vector<Scalar>(l.coeffs().begin(), l.coeffs().end());
      for (auto& x : c) x /= k;
      c[i] = 1.0;
      return {LinearForm(l.mu(), std::move(c)), k};
    }
  }
  return {l, Scalar{1.0}};
}

LinearForm canonical_sign(const LinearForm& l, Tolerance tol) {
  const double scale = max_magnitude(l.coeffs());
  for (std::size_t i = 0; i < l.n(); ++i) {
    if (scale > 0.0 && std::abs(l[i]) > tol.tol * scale) {
      const Scalar x = l[i];
      const bool positive = x.real() > 0.0 || (x.real() == 0.0 && x.imag() > 0.0);
      return positive ? l : l.scaled(-1.0);
    }
  }
  return l;
}

SkewPoly expand(const Factorization& f) {
  return std::visit(
      [&](const auto& s) -> SkewPoly {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroForm>) {
          return SkewPoly(f.mu);
        } else if constexpr (std::is_same_v<T, Square>) {
          const auto p = s.l.to_poly();
          return multiply(p, p);
        } else if constexpr (std::is_same_v<T, Product>) {
          return multiply(s.l1.to_poly(), s.l2.to_poly());
        } else {
          const auto p3 = s.l3.to_poly();
          return multiply(s.l1.to_poly(), s.l2.to_poly()) + multiply(p3, p3);
        }
      },
      f.shape);
}

double scaled_residual(const QuadraticForm& q, const SkewPoly& p) {
  const SkewPoly diff = q.to_poly() - p;
  return diff.max_coefficient() / std::max(1.0, q.max_coefficient());
}

// ---------------------------------------------------------------- n = 2

MuRank mu_rank_2(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 2, "mu_rank_2");
  MuRank r;
  if (q.is_zero(tol)) return r;
  const auto p = normalize_max(q, tol);
  const Scalar d = mu_det_2(form_to_matrix(p.form));
  r.diagnostics.normalizer = p.normalizer;
  r.diagnostics.scale = form_scale(p.form);
  r.diagnostics.d = d;
  r.value = tol.is_zero(d, r.diagnostics.scale, 2) ? 1 : 2;
  return r;
}

std::optional<LinearForm> square_2(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 2, "square_2");
  if (q.is_zero(tol)) throw InputError("square_2 requires a nonzero form");
  const auto p = normalize_max(q, tol);
  if (!tol.is_zero(mu_det_2(form_to_matrix(p.form)), 1.0, 2)) return std::nullopt;

  // L^2 = Q forces alpha_1^2 = a and alpha_2^2 = c; only the relative sign is free.
  const auto [a, b, c] = p.form.coeffs2();
  const Scalar r1 = principal_sqrt(a);
  const Scalar r2 = principal_sqrt(c);
  std::vector<Factorization> cands;
  for (Scalar s : {Scalar{1.0}, Scalar{-1.0}}) cands.push_back(make_square(p.form, linear(q.mu(), {r1, s * r2}), tol));
  auto best = best_by_residual(cands);
  const auto& l = std::get<Square>(best->shape).l;
  auto f = make_square(q, l.scaled(principal_sqrt(p.normalizer)), tol);
  require_verified(f, tol, "square_2");
  return std::get<Square>(f.shape).l;
}

bool unique_factor_2(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 2, "unique_factor_2");
  if (q.is_zero(tol)) throw InputError("unique_factor_2 requires a nonzero form");
  const auto p = normalize_max(q, tol);
  const auto [a, b, c] = p.form.coeffs2();
  return tol.is_zero(b * b - q.mu()(0, 1) * a * c, 1.0, 2);
}

std::vector<Factorization> factor_2(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 2, "factor_2");
  if (q.is_zero(tol)) throw InputError("factor_2 requires a nonzero form (rank 0)");
  const auto& mu = q.mu();
  const Scalar m12 = mu(0, 1);
  const Scalar m21 = mu(1, 0);
  const auto p = normalize_max(q, tol);
  const auto [a, b, c] = p.form.coeffs2();

  const Scalar radicand = b * b - m12 * a * c;
  const bool unique = tol.is_zero(radicand, 1.0, 2);

  struct Class {
    LinearForm l1, l2;
    std::optional<Scalar> h;
  };
  std::vector<Class> classes;
  if (a != Scalar{} && c != Scalar{}) {
    const Scalar h = unique ? Scalar{} : principal_sqrt(radicand);
    for (Scalar hh : {h, -h}) {
      const Scalar beta = b + hh;
      if (beta == Scalar{}) continue;
      classes.push_back({linear(mu, {1.0, c / beta}), linear(mu, {a, beta}), hh});
      if (unique) break;
    }
  } else if (a == Scalar{} && c == Scalar{}) {
    classes.push_back({linear(mu, {1.0, 0.0}), linear(mu, {0.0, 2.0 * b}), {}});
    classes.push_back({linear(mu, {0.0, 1.0}), linear(mu, {2.0 * b * m21, 0.0}), {}});
  } else if (a == Scalar{}) {
    classes.push_back({linear(mu, {2.0 * b, c}), linear(mu, {0.0, 1.0}), {}});
    if (!unique) classes.push_back({linear(mu, {0.0, 1.0}), linear(mu, {2.0 * b * m21, c}), {}});
  } else {
    classes.push_back({linear(mu, {1.0, 0.0}), linear(mu, {a, 2.0 * b}), {}});
    if (!unique) classes.push_back({linear(mu, {a, 2.0 * b * m21}), linear(mu, {1.0, 0.0}), {}});
  }

  std::vector<Factorization> out;
  for (const auto& cl : classes) {
    auto f = make_product(q, cl.l1, cl.l2.scaled(p.normalizer), tol);
    f.h = cl.h;
    require_verified(f, tol, "factor_2");
    out.push_back(std::move(f));
  }

  // Report the class that is a perfect square as such.
  if (auto sq = square_2(q, tol)) {
    std::size_t best = 0;
    double best_det = std::numeric_limits<double>::infinity();
    const auto [l0, k0] = make_monic(*sq, tol);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& l1 = std::get<Product>(out[i].shape).l1;
      const double det = std::abs(l1[0] * l0[1] - l1[1] * l0[0]);
      if (det < best_det) {
        best_det = det;
        best = i;
      }
    }
    auto f = make_square(q, *sq, tol);
    f.h = out[best].h;
    out[best] = std::move(f);
  }
  return out;
}

// ---------------------------------------------------------------- n = 3

MuRank mu_rank_3(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 3, "mu_rank_3");
  MuRank r;
  if (q.is_zero(tol)) return r;
  const auto p = prepare3(q, tol);
  const double s = form_scale(p.form);
  const auto m = form_to_matrix(p.form);
  auto& dg = r.diagnostics;
  dg.normalizer = p.normalizer;
  dg.scale = s;
  dg.minors = mu_minors_3(m);
  dg.d7 = mu_det_D7(m);
  dg.d8 = mu_det_D8_all_signs(m, tol);
  dg.sextic = sextic(m);
  const bool a_is_one = p.form.alpha(0, 0) != Scalar{};
  dg.a_is_one = a_is_one;

  if (std::all_of(dg.minors->begin(), dg.minors->end(), [&](Scalar x) { return tol.is_zero(x, s, 2); })) {
    r.value = 1;
    return r;
  }
  bool factors = false;
  if (a_is_one) {
    factors = std::any_of(dg.d8->begin(), dg.d8->end(), [&](const D8Value& v) { return tol.is_zero(v.value, s, 2); });
  } else {
    // D7 vanishes iff one of its cubic factors does; test those directly.
    const auto [f1, f2] = mu_det_D7_factors(m);
    factors = tol.is_zero(f1, s, 3) || tol.is_zero(f2, s, 3);
  }
  r.value = factors ? 2 : 3;
  return r;
}

std::optional<LinearForm> square_3(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 3, "square_3");
  if (q.is_zero(tol)) throw InputError("square_3 requires a nonzero form");
  const auto p = prepare3(q, tol);
  const double s = form_scale(p.form);
  const auto m = form_to_matrix(p.form);
  const auto minors = mu_minors_3(m);
  if (!std::all_of(minors.begin(), minors.end(), [&](Scalar x) { return tol.is_zero(x, s, 2); })) return std::nullopt;

  const auto& mu = q.mu();
  std::vector<Factorization> cands;
  const auto [a, b, c, d, e, f] = p.form.coeffs3();
  if (a == Scalar{}) {
    // d = e = 0 here, so Q lives on z2, z3 and the two-generator test applies.
    const auto sub = sub_form(p.form, 1, 2);
    if (!sub.is_zero(tol)) {
      if (auto l = square_2(sub, tol)) {
        const std::array<std::size_t, 2> slots{1, 2};
        cands.push_back(make_square(p.form, l->lifted(mu, slots), tol));
      }
    }
  } else {
    // a = 1: Q' = (z1 + w1 z2 + w2 z3)^2 with w1^2 = ab, w2^2 = ac; the sign
    // freedoms (and the mu = -1 cases) are resolved by trying all of them.
    const Scalar w1 = principal_sqrt(b);
    const Scalar w2 = principal_sqrt(c);
    for (Scalar s1 : {Scalar{1.0}, Scalar{-1.0}})
      for (Scalar s2 : {Scalar{1.0}, Scalar{-1.0}})
        cands.push_back(make_square(p.form, linear(mu, {1.0, s1 * w1, s2 * w2}), tol));
  }
  if (cands.empty()) throw VerificationError("square_3: minors vanish but no square candidate was built");
  auto best = best_by_residual(cands);
  const auto& l = std::get<Square>(best->shape).l;
  auto fz = make_square(q, l.scaled(principal_sqrt(p.normalizer)), tol);
  require_verified(fz, tol, "square_3");
  return std::get<Square>(fz.shape).l;
}

std::optional<Factorization> factor_3(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 3, "factor_3");
  if (q.is_zero(tol)) throw InputError("factor_3 requires a nonzero form");
  const auto p = prepare3(q, tol);
  const double s = form_scale(p.form);
  const auto m = form_to_matrix(p.form);
  const auto& mu = q.mu();
  const auto [a, b, c, d, e, f] = p.form.coeffs3();

  struct Candidate {
    LinearForm l1, l2;
    std::optional<RadicalPair> radicals;
    double residual;
  };
  std::vector<Candidate> cands;
  auto add = [&](LinearForm l1, LinearForm l2, std::optional<RadicalPair> rp = {}) {
    Factorization probe{mu, Product{l1, l2}, {}, {}, 0.0};
    const double res = residual_of(p.form, probe);
    cands.push_back({std::move(l1), std::move(l2), rp, res});
  };

  if (a == Scalar{}) {
    const auto [f1, f2] = mu_det_D7_factors(m);
    if (!tol.is_zero(f1, s, 3) && !tol.is_zero(f2, s, 3)) return std::nullopt;
    if (d != Scalar{} && e != Scalar{}) {
      add(linear(mu, {2.0, b / d, c / e}), linear(mu, {0.0, d, e}));
      add(linear(mu, {0.0, 2.0 * d * mu(1, 0), 2.0 * e * mu(2, 0)}),
          linear(mu, {1.0, b * mu(0, 1) / (2.0 * d), c * mu(0, 2) / (2.0 * e)}));
    }
    // Degenerate branches: Q in <z3>, Q in <z2>, Q on z2, z3 only, Q in <z1>.
    add(linear(mu, {2.0 * e, 2.0 * f, c}), linear(mu, {0.0, 0.0, 1.0}));
    add(linear(mu, {2.0 * d, b, 2.0 * mu(2, 1) * f}), linear(mu, {0.0, 1.0, 0.0}));
    add(linear(mu, {1.0, 0.0, 0.0}), linear(mu, {0.0, 2.0 * d, 2.0 * e}));
    const auto sub = sub_form(p.form, 1, 2);
    if (!sub.is_zero(tol)) {
      const auto f2cls = factor_2(sub, tol);
      const std::array<std::size_t, 2> slots{1, 2};
      const auto& cl = f2cls.front();
      if (const auto* pr = std::get_if<Product>(&cl.shape)) {
        add(pr->l1.lifted(mu, slots), pr->l2.lifted(mu, slots));
      } else {
        const auto& l = std::get<Square>(cl.shape).l;
        add(l.lifted(mu, slots), l.lifted(mu, slots));
      }
    }
  } else {
    // a = 1: Q = [z1 + mu_21 (d + X) z2 + mu_31 (e + Y) z3][z1 + (d - X) z2 + (e - Y) z3].
    for (const auto& v : mu_det_D8_all_signs(m, tol)) {
      if (!tol.is_zero(v.value, s, 2)) continue;
      const auto& r = v.radicals;
      add(linear(mu, {1.0, mu(1, 0) * (d + r.x), mu(2, 0) * (e + r.y)}), linear(mu, {1.0, d - r.x, e - r.y}), r);
    }
    if (cands.empty()) return std::nullopt;
  }

  auto best = best_by_residual(cands);
  auto out = make_product(q, best->l1, best->l2.scaled(p.normalizer), tol);
  out.radicals = best->radicals;
  require_verified(out, tol, "factor_3");
  return out;
}

namespace {

// Case analysis of Q = L1 L2 + L3^2 for a = 1.
Triple decompose_monic(const QuadraticForm& q, Tolerance tol) {
  const auto& mu = q.mu();
  const auto [a, b, c, d, e, f] = q.coeffs3();
  const bool m12_neg = tol.equal(mu(0, 1), -1.0);
  const bool m13_neg = tol.equal(mu(0, 2), -1.0);
  const Scalar s23 = 1.0 + mu(1, 2);
  const auto zero = LinearForm::zero(mu);

  if (!m12_neg && !m13_neg) {
    // Complete the square, then factor the residual form on z2, z3.
    const auto l3 = linear(mu, {1.0, 2.0 * d / (1.0 + mu(0, 1)), 2.0 * e / (1.0 + mu(0, 2))});
    const auto rest = sub_form(q + square_linear(l3).scaled(-1.0), 1, 2);
    if (rest.is_zero(tol)) return {zero, zero, l3};
    const auto cls = factor_2(rest, tol).front();
    const std::array<std::size_t, 2> slots{1, 2};
    if (const auto* pr = std::get_if<Product>(&cls.shape))
      return {pr->l1.lifted(mu, slots), pr->l2.lifted(mu, slots), l3};
    const auto& l = std::get<Square>(cls.shape).l;
    return {l.lifted(mu, slots), l.lifted(mu, slots), l3};
  }

  if (m12_neg && !m13_neg) {
    if (c == Scalar{} && e == Scalar{}) {
      // (z1 + eps z2)^2 - 2 z2 (d z1 - f z3), eps^2 = b.
      return {linear(mu, {0.0, -2.0, 0.0}), linear(mu, {d, 0.0, -f}), linear(mu, {1.0, principal_sqrt(b), 0.0})};
    }
    // (z1 + gamma z2 + delta z3)^2 + (z1 + alpha z2)(2d z2 + beta z3) with
    // delta^2 = c, beta = 2e - (1 + mu_13) delta != 0, gamma^2 = b - 2d alpha,
    // (1 + mu_23) gamma delta + alpha beta = 2f.
    const Scalar s13 = 1.0 + mu(0, 2);
    const Scalar root_c = principal_sqrt(c);
    const Scalar beta_p = 2.0 * e - s13 * root_c;
    const Scalar beta_m = 2.0 * e + s13 * root_c;
    const Scalar delta = std::abs(beta_p) >= std::abs(beta_m) ? root_c : -root_c;
    const Scalar beta = 2.0 * e - s13 * delta;
    // Eliminating alpha: gamma^2 + pg gamma + qg = 0.
    const Scalar pg = -2.0 * d * s23 * delta / beta;
    const Scalar qg = 4.0 * d * f / beta - b;
    const Scalar disc = principal_sqrt(pg * pg - 4.0 * qg);
    std::vector<std::pair<Triple, double>> options;
    for (Scalar gamma : {(-pg + disc) / 2.0, (-pg - disc) / 2.0}) {
      const Scalar alpha = (2.0 * f - s23 * gamma * delta) / beta;
      Triple t{linear(mu, {1.0, alpha, 0.0}), linear(mu, {0.0, 2.0 * d, beta}), linear(mu, {1.0, gamma, delta})};
      Factorization probe{mu, SumOfProducts{t.l1, t.l2, t.l3}, {}, {}, 0.0};
      options.emplace_back(std::move(t), residual_of(q, probe));
    }
    return std::min_element(options.begin(), options.end(),
                            [](const auto& x, const auto& y) { return x.second < y.second; })
        ->first;
  }

  if (!m12_neg && m13_neg) {
    // Swap z2 and z3 to land in the previous case.
    const std::array<std::size_t, 3> perm{0, 2, 1};
    return relabel_back(decompose_monic(q.relabeled(perm), tol), perm);
  }

  // mu_12 = -1 = mu_13.
  if (e == Scalar{}) {
    // (z1 + delta z3)^2 + (2d z1 + b z2 + 2 mu_32 f z3) z2, delta^2 = c.
    return {linear(mu, {2.0 * d, b, 2.0 * mu(2, 1) * f}), linear(mu, {0.0, 1.0, 0.0}),
            linear(mu, {1.0, 0.0, principal_sqrt(c)})};
  }
  // (z1 + alpha z2 + beta z3)^2 + 2 (z1 + gamma z2)(d z2 + e z3) with
  // alpha^2 + 2d gamma = b, beta^2 = c, (1 + mu_23) alpha beta + 2e gamma = 2f.
  const Scalar beta = principal_sqrt(c);
  const Scalar pa = -d * s23 * beta / e;
  const Scalar qa = 2.0 * d * f / e - b;
  const Scalar disc = principal_sqrt(pa * pa - 4.0 * qa);
  std::vector<std::pair<Triple, double>> options;
  for (Scalar alpha : {(-pa + disc) / 2.0, (-pa - disc) / 2.0}) {
    const Scalar gamma = (2.0 * f - s23 * alpha * beta) / (2.0 * e);
    Triple t{linear(mu, {2.0, 2.0 * gamma, 0.0}), linear(mu, {0.0, d, e}), linear(mu, {1.0, alpha, beta})};
    Factorization probe{mu, SumOfProducts{t.l1, t.l2, t.l3}, {}, {}, 0.0};
    options.emplace_back(std::move(t), residual_of(q, probe));
  }
  return std::min_element(options.begin(), options.end(),
                          [](const auto& x, const auto& y) { return x.second < y.second; })
      ->first;
}

// q has been rescaled and snapped, so zero tests below are exact.
Triple decompose_prepared(const QuadraticForm& q, Tolerance tol) {
  const auto& mu = q.mu();
  const auto [a, b, c, d, e, f] = q.coeffs3();
  const auto zero = LinearForm::zero(mu);

  if (a == Scalar{}) {
    if (b != Scalar{}) {
      const std::array<std::size_t, 3> perm{1, 0, 2};
      return relabel_back(decompose_prepared(q.relabeled(perm), tol), perm);
    }
    if (c != Scalar{}) {
      const std::array<std::size_t, 3> perm{2, 1, 0};
      return relabel_back(decompose_prepared(q.relabeled(perm), tol), perm);
    }
    if (e == Scalar{}) {
      // 2d z1z2 + 2f z2z3 = (2d z1 + 2 mu_32 f z3) z2.
      return {linear(mu, {2.0 * d, 0.0, 2.0 * mu(2, 1) * f}), linear(mu, {0.0, 1.0, 0.0}), zero};
    }
    // 2 (z1 + alpha z2)(d z2 + e z3) - 2 alpha d z2^2 with alpha e = f.
    const Scalar alpha = f / e;
    return {linear(mu, {2.0, 2.0 * alpha, 0.0}), linear(mu, {0.0, d, e}),
            linear(mu, {0.0, principal_sqrt(-2.0 * alpha * d), 0.0})};
  }

  auto t = decompose_monic(q.scaled(1.0 / a), tol);
  return {t.l1.scaled(a), t.l2, t.l3.scaled(principal_sqrt(a))};
}

}  // namespace

Factorization decompose_3(const QuadraticForm& q, Tolerance tol) {
  require_n(q, 3, "decompose_3");
  const auto& mu = q.mu();
  if (q.is_zero(tol)) {
    const auto z = LinearForm::zero(mu);
    auto f = make_sum(q, z, z, z, tol);
    return f;
  }
  const auto p = normalize_max(q, tol);
  const auto t = decompose_prepared(p.form, tol);
  auto f = make_sum(q, t.l1.scaled(p.normalizer), t.l2, t.l3.scaled(principal_sqrt(p.normalizer)), tol);
  require_verified(f, tol, "decompose_3");
  return f;
}

// ---------------------------------------------------------------- any n

std::optional<LinearForm> square_general(const QuadraticForm& q, Tolerance tol) {
  if (q.is_zero(tol)) throw InputError("square test requires a nonzero form");
  const auto p = normalize_max(q, tol);
  const auto n = q.n();
  const auto& mu = q.mu();
  std::vector<Scalar> roots(n);
  std::vector<std::size_t> free;  // indices whose root sign is undetermined
  for (std::size_t i = 0; i < n; ++i) {
    roots[i] = principal_sqrt(p.form.alpha(i, i));
    if (roots[i] != Scalar{}) free.push_back(i);
  }
  if (free.empty()) return std::nullopt;  // zero diagonal but nonzero cross terms
  const std::size_t combos = std::size_t{1} << (free.size() - 1);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    auto alpha = roots;
    for (std::size_t k = 1; k < free.size(); ++k)
      if (mask & (std::size_t{1} << (k - 1))) alpha[free[k]] = -alpha[free[k]];
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        ok = tol.equal((1.0 + mu(i, j)) * alpha[i] * alpha[j], p.form.alpha(i, j));
    if (!ok) continue;
    auto f = make_square(q, linear(mu, std::move(alpha)).scaled(principal_sqrt(p.normalizer)), tol);
    require_verified(f, tol, "square_general");
    return std::get<Square>(f.shape).l;
  }
  return std::nullopt;
}

std::optional<int> mu_rank_general(const QuadraticForm& q, Tolerance tol) {
  if (q.n() == 2) return mu_rank_2(q, tol).value;
  if (q.n() == 3) return mu_rank_3(q, tol).value;
  if (q.is_zero(tol)) return 0;
  if (q.n() == 1) return 1;
  if (square_general(q, tol)) return 1;
  return std::nullopt;
}

std::vector<PermutedRank> rank_under_permutations(const QuadraticForm& q, Tolerance tol) {
  if (q.n() > 3) throw InputError("permutation diagnostic supports n <= 3");
  std::vector<std::size_t> perm(q.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<PermutedRank> out;
  do {
    out.push_back({perm, mu_rank_general(q.relabeled(perm), tol).value_or(-1)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace skewform
