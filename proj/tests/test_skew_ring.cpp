#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "skewform/errors.hpp"
#include "skewform/oracle.hpp"
#include "skewform/skew_ring.hpp"
#include "test_util.hpp"

using namespace skewform;
using testutil::gap;
using testutil::mu2;
using testutil::mu3;
using testutil::near;

namespace {

// Every coefficient reachable by some sequence of adjacent swaps on `word`.
void all_rewrite_paths(const MuMatrix& mu, std::vector<std::size_t> word, Scalar acc, std::vector<Scalar>& out) {
  bool sorted = true;
  for (std::size_t k = 0; k + 1 < word.size(); ++k) {
    if (word[k] <= word[k + 1]) continue;
    sorted = false;
    auto next = word;
    std::swap(next[k], next[k + 1]);
    all_rewrite_paths(mu, next, acc * mu(word[k + 1], word[k]), out);
  }
  if (sorted) out.push_back(acc);
}

}  // namespace

TEST_CASE("mu matrix validation") {
  CHECK_NOTHROW(MuMatrix::from_entries(2, {1.0, 2.0, 0.5, 1.0}));
  CHECK_THROWS_AS(MuMatrix::from_entries(2, {1.0, 2.0, 2.0, 1.0}), InputError);
  CHECK_THROWS_AS(MuMatrix::from_entries(2, {2.0, 1.0, 1.0, 1.0}), InputError);
  CHECK_THROWS_AS(MuMatrix::from_entries(2, {1.0, 0.0, 0.0, 1.0}), InputError);
  CHECK_THROWS_AS(MuMatrix::from_entries(2, {1.0, 2.0, 0.5}), InputError);
  const auto mu = mu3(2.0, 3.0, Scalar{0.0, 1.0});
  CHECK(near(mu(1, 0), 0.5));
  CHECK(near(mu(2, 1), Scalar{0.0, -1.0}));
}

TEST_CASE("z3 z2 z1 picks up mu13 mu23 mu12 on every rewrite path") {
  const auto mu = mu3(Scalar{1.3, 0.2}, Scalar{-0.7, 0.9}, Scalar{2.0, -1.0});
  std::vector<Scalar> paths;
  all_rewrite_paths(mu, {2, 1, 0}, 1.0, paths);
  CHECK(paths.size() == 2);
  const Scalar expected = mu(0, 2) * mu(1, 2) * mu(0, 1);
  for (const auto& c : paths) CHECK(near(c, expected));

  const RawTerm t{1.0, {2, 1, 0}};
  const auto p = normal_form(mu, std::span(&t, 1));
  CHECK(p.terms().size() == 1);
  CHECK(near(p.coeff(Monomial{{1, 1, 1}}), expected));
  CHECK(near(normal_form(mu, std::span(&t, 1), RewriteOrder::RightToLeft).coeff(Monomial{{1, 1, 1}}), expected));
}

TEST_CASE("longer words agree with the path oracle") {
  const auto mu = mu3(Scalar{0.8, 0.6}, 2.0, Scalar{0.3, -1.1});
  for (const std::vector<std::size_t> w : {std::vector<std::size_t>{2, 0, 1, 0}, {1, 2, 0, 2, 1}, {2, 2, 1, 0, 0}}) {
    std::vector<Scalar> paths;
    all_rewrite_paths(mu, w, 1.0, paths);
    for (const auto& c : paths) CHECK(near(c, paths.front()));
    auto sorted = w;
    CHECK(near(normal_order_word(mu, sorted), paths.front()));
    CHECK(std::is_sorted(sorted.begin(), sorted.end()));
  }
}

TEST_CASE("defining relation and commutative reduction") {
  const auto mu = mu2(3.0);
  const auto z1 = SkewPoly::generator(mu, 0);
  const auto z2 = SkewPoly::generator(mu, 1);
  CHECK(gap(z2 * z1, 3.0 * (z1 * z2)) == 0.0);
  const auto one = MuMatrix::identity(2);
  const auto x = SkewPoly::generator(one, 0);
  const auto y = SkewPoly::generator(one, 1);
  CHECK(gap(y * x, x * y) == 0.0);
}

TEST_CASE("(z1 + 2 z2)^2 at mu_12 = 2") {
  const auto mu = mu2(2.0);
  const LinearForm l(mu, {1.0, 2.0});
  const auto sq = multiply(l.to_poly(), l.to_poly());
  CHECK(near(sq.coeff(Monomial{{2, 0}}), 1.0));
  CHECK(near(sq.coeff(Monomial{{1, 1}}), 6.0));
  CHECK(near(sq.coeff(Monomial{{0, 2}}), 4.0));
  const auto prod = product_linear(LinearForm(mu, {1.0, 1.0}), LinearForm(mu, {1.0, 4.0}));
  CHECK(gap(prod.to_poly(), sq) < 1e-15);
  CHECK(gap(square_linear(l).to_poly(), sq) < 1e-15);
}

TEST_CASE("closed forms match multiplication on random input") {
  oracle::Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto mu = oracle::random_mu(rng, 2 + rng.below(3), oracle::MuMode::Generic);
    const auto l1 = oracle::random_linear(rng, mu);
    const auto l2 = oracle::random_linear(rng, mu);
    CHECK(gap(product_linear(l1, l2).to_poly(), multiply(l1.to_poly(), l2.to_poly())) < 1e-13);
    CHECK(gap(square_linear(l1).to_poly(), multiply(l1.to_poly(), l1.to_poly())) < 1e-13);
  }
}

TEST_CASE("multiplication is associative") {
  oracle::Rng rng(11);
  const auto mu = mu3(Scalar{0.5, 0.5}, -1.0, 3.0);
  auto poly = [&] {
    SkewPoly p(mu);
    for (int t = 0; t < 3; ++t) {
      std::vector<RawTerm> raw{{rng.scalar(), {rng.below(3), rng.below(3)}}};
      p = p + normal_form(mu, raw);
    }
    return p;
  };
  for (int k = 0; k < 50; ++k) {
    const auto p = poly();
    const auto q = poly();
    const auto r = poly();
    CHECK(gap((p * q) * r, p * (q * r)) < 1e-13);
  }
}

TEST_CASE("twist product matches S for n = 2") {
  const auto mu = mu2(Scalar{0.2, 1.7});
  const LinearForm r1(mu, {Scalar{1.0, 2.0}, 3.0});
  const LinearForm r2(mu, {-1.0, Scalar{0.5, -0.5}});
  CHECK(gap(tau_star_product(r1, r2), product_linear(r1, r2)) < 1e-14);
}

TEST_CASE("twist detection") {
  CHECK(is_twist_of_polynomial_ring(mu3(2.0, 6.0, 3.0)));
  CHECK_FALSE(is_twist_of_polynomial_ring(mu3(2.0, 5.0, 3.0)));
  CHECK(is_twist_of_polynomial_ring(MuMatrix::identity(4)));
}

TEST_CASE("quadratic form from polynomial") {
  const auto mu = mu2(2.0);
  const auto z1 = SkewPoly::generator(mu, 0);
  const auto z2 = SkewPoly::generator(mu, 1);
  const auto q = QuadraticForm::from_poly(z2 * z1 + z1 * z1);
  CHECK(near(q.alpha(0, 0), 1.0));
  CHECK(near(q.alpha(0, 1), 2.0));
  CHECK(near(q.alpha(1, 1), 0.0));
  CHECK_THROWS_AS(QuadraticForm::from_poly(z1 * z1 * z2), InputError);
  CHECK_THROWS_AS(QuadraticForm::from_poly(z1 + z1 * z2), InputError);
  CHECK(QuadraticForm::from_poly(SkewPoly(mu)).is_zero());
}

TEST_CASE("mismatched contexts are rejected") {
  const LinearForm a(mu2(2.0), {1.0, 1.0});
  const LinearForm b(mu2(3.0), {1.0, 1.0});
  CHECK_THROWS_AS(product_linear(a, b), InputError);
  CHECK_THROWS_AS(a.to_poly() * b.to_poly(), InputError);
}

TEST_CASE("out of range generator in a raw word") {
  const RawTerm t{1.0, {0, 5}};
  CHECK_THROWS_AS(normal_form(mu2(2.0), std::span(&t, 1)), InputError);
}

TEST_CASE("relabeling permutes generators and mu together") {
  const auto mu = mu3(2.0, 3.0, 5.0);
  const std::size_t perm[] = {2, 0, 1};
  const auto q = QuadraticForm(mu, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  const auto r = q.relabeled(perm);
  CHECK(near(r.mu()(0, 1), mu(2, 0)));
  // z3^2 becomes the new z1^2.
  CHECK(near(r.alpha(0, 0), 6.0));
  const std::size_t inv[] = {1, 2, 0};
  CHECK(gap(r.relabeled(inv), q) < 1e-15);
}
