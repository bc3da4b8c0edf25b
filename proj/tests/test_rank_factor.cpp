#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewform/errors.hpp"
#include "skewform/form_parser.hpp"
#include "skewform/oracle.hpp"
#include "skewform/rank_factor.hpp"
#include "test_util.hpp"

using namespace skewform;
using testutil::gap;
using testutil::mu2;
using testutil::mu3;
using testutil::near;

namespace {

bool same_linear(const LinearForm& l, std::initializer_list<Scalar> expected, double rel = 1e-12) {
  std::size_t k = 0;
  for (const auto& c : expected)
    if (!near(l[k++], c, rel)) return false;
  return true;
}

}  // namespace

TEST_CASE("z1^2 + 6 z1 z2 + 4 z2^2 at mu_12 = 2: rank 1 with two classes") {
  const auto mu = mu2(2.0);
  const QuadraticForm q(mu, {1.0, 6.0, 4.0});
  CHECK(mu_rank_2(q).value == 1);
  const auto classes = factor_2(q);
  REQUIRE(classes.size() == 2);
  bool saw_square = false;
  bool saw_product = false;
  for (const auto& f : classes) {
    CHECK(f.residual <= 1e-12);
    if (const auto* s = std::get_if<Square>(&f.shape)) saw_square = same_linear(s->l, {1.0, 2.0});
    if (const auto* p = std::get_if<Product>(&f.shape))
      saw_product = same_linear(p->l1, {1.0, 1.0}) && same_linear(p->l2, {1.0, 4.0});
  }
  CHECK(saw_square);
  CHECK(saw_product);
  CHECK_FALSE(unique_factor_2(q));
}

TEST_CASE("mu_12 = -1 forbids squares with a cross term") {
  const auto mu = mu2(-1.0);
  const auto q = QuadraticForm::from_coeffs(mu, Coeffs2{1.0, 1.5, 2.0});
  const auto r = mu_rank_2(q);
  CHECK(r.value == 2);
  CHECK(near(mu_det_2(form_to_matrix(q)), 4.0 * 1.5 * 1.5));
  // Diagnostics are taken on Q / normalizer.
  const Scalar n = r.diagnostics.normalizer;
  CHECK(near(*r.diagnostics.d * n * n, 4.0 * 1.5 * 1.5));
  CHECK_FALSE(square_2(q).has_value());
}

TEST_CASE("n = 2 degenerate branches") {
  const auto mu = mu2(Scalar{0.0, 1.0});
  for (const auto& c : {Coeffs2{0.0, 1.0, 3.0}, Coeffs2{2.0, 1.0, 0.0}, Coeffs2{0.0, 1.0, 0.0}, Coeffs2{1.0, 0.0, 0.0},
                        Coeffs2{0.0, 0.0, 5.0}}) {
    const auto q = QuadraticForm::from_coeffs(mu, c);
    const auto classes = factor_2(q);
    CHECK((classes.size() == 1 || classes.size() == 2));
    CHECK((classes.size() == 1) == unique_factor_2(q));
    for (const auto& f : classes) CHECK(oracle::verify_factorization(q, f).passed);
  }
  CHECK(mu_rank_2(QuadraticForm::from_coeffs(mu, Coeffs2{0.0, 0.0, 5.0})).value == 1);
  CHECK(mu_rank_2(QuadraticForm(mu)).value == 0);
  CHECK_THROWS_AS(factor_2(QuadraticForm(mu)), InputError);
}

TEST_CASE("n = 3 square (2 z1 + z2 + 8 z3)^2 with mu_12 = mu_13") {
  oracle::Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const auto mu = oracle::random_mu(rng, 3, oracle::MuMode::EqualM12M13);
    const LinearForm l(mu, {2.0, 1.0, 8.0});
    const auto q = square_linear(l);
    const auto r = mu_rank_3(q);
    CHECK(r.value == 1);
    const auto sq = square_3(q);
    REQUIRE(sq.has_value());
    CHECK(same_linear(*sq, {2.0, 1.0, 8.0}, 1e-10));
  }
}

TEST_CASE("sum of squares at mu = 1 has rank 3") {
  const auto q = QuadraticForm::from_coeffs(MuMatrix::identity(3), Coeffs3{1.0, 1.0, 1.0, 0.0, 0.0, 0.0});
  CHECK(mu_rank_3(q).value == 3);
  CHECK_FALSE(factor_3(q).has_value());
  const auto f = decompose_3(q);
  CHECK(f.is_sum_of_products());
  CHECK(oracle::verify_factorization(q, f).passed);
}

TEST_CASE("sum-of-products decomposition of z1^2 + 2 z1 z2 at mu = 1") {
  const auto mu = MuMatrix::identity(3);
  const auto q = parse_quadratic("z1^2 + 2 z1 z2", mu);
  const auto f = decompose_3(q);
  const auto* s = std::get_if<SumOfProducts>(&f.shape);
  REQUIRE(s != nullptr);
  CHECK(same_linear(s->l1, {0.0, -1.0, 0.0}));
  CHECK(same_linear(s->l2, {0.0, 1.0, 0.0}));
  CHECK(same_linear(s->l3, {1.0, 1.0, 0.0}));
}

TEST_CASE("planted products factor with a = 0 and a = 1") {
  oracle::Rng rng(22);
  for (int k = 0; k < 200; ++k) {
    const auto mu = oracle::random_mu(rng, 3, oracle::MuMode::Generic);
    auto l1 = oracle::random_linear(rng, mu);
    if (k % 2 == 0) l1 = LinearForm(mu, {0.0, l1[1], l1[2]});
    const auto l2 = oracle::random_linear(rng, mu);
    const auto q = product_linear(l1, l2);
    CHECK(mu_rank_3(q).value <= 2);
    const auto f = factor_3(q);
    REQUIRE(f.has_value());
    CHECK(oracle::verify_factorization(q, *f, 1e-8).passed);
  }
}

TEST_CASE("decompose_3 covers the special branches") {
  const std::vector<MuMatrix> mus{mu3(-1.0, 2.0, 3.0), mu3(2.0, -1.0, 3.0), mu3(-1.0, -1.0, 3.0),
                                  mu3(-1.0, -1.0, -1.0), MuMatrix::identity(3), mu3(Scalar{0.0, 1.0}, 2.0, 0.5)};
  const std::vector<Coeffs3> coeffs{
      {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, {0.0, 2.0, 3.0, 4.0, 5.0, 6.0}, {0.0, 0.0, 3.0, 4.0, 5.0, 6.0},
      {0.0, 2.0, 0.0, 4.0, 5.0, 6.0}, {0.0, 0.0, 0.0, 4.0, 5.0, 6.0}, {0.0, 0.0, 0.0, 4.0, 0.0, 6.0},
      {0.0, 0.0, 0.0, 0.0, 0.0, 6.0}, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 1.0, 0.0},
      {1.0, 0.0, 0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}};
  for (const auto& mu : mus)
    for (const auto& c : coeffs) {
      const auto q = QuadraticForm::from_coeffs(mu, c);
      const auto f = decompose_3(q);
      INFO(print(q));
      CHECK(oracle::verify_factorization(q, f, 1e-8).passed);
    }
}

TEST_CASE("rank is invariant under nonzero scalars") {
  oracle::Rng rng(23);
  for (int k = 0; k < 200; ++k) {
    oracle::InstanceSpec spec{3, static_cast<oracle::PlantMode>(k % 5), oracle::MuMode::Generic, 1.0, 0};
    const auto inst = oracle::InstanceStream(rng.next(), spec).next();
    const Scalar s = std::polar(0.1 + 10.0 * rng.uniform(0.0, 1.0), rng.uniform(0.0, 6.28));
    CHECK(mu_rank_3(inst.q).value == mu_rank_3(inst.q.scaled(s)).value);
  }
}

TEST_CASE("n >= 4 squares and the undetermined case") {
  oracle::Rng rng(24);
  const auto mu = oracle::random_mu(rng, 4, oracle::MuMode::Generic);
  const auto l = oracle::random_linear(rng, mu);
  const auto q = square_linear(l);
  CHECK(mu_rank_general(q) == 1);
  const auto root = square_general(q);
  REQUIRE(root.has_value());
  CHECK(gap(square_linear(*root), q) < 1e-10);
  CHECK_FALSE(mu_rank_general(oracle::random_form(rng, mu)).has_value());
  CHECK(mu_rank_general(QuadraticForm(mu)) == 0);
}

TEST_CASE("permutation diagnostic lists six orders") {
  const auto q = QuadraticForm::from_coeffs(mu3(2.0, 3.0, 5.0), Coeffs3{1.0, 2.0, 3.0, 0.0, 0.0, 0.0});
  const auto perms = rank_under_permutations(q);
  CHECK(perms.size() == 6);
  CHECK(perms.front().rank == mu_rank_3(q).value);
}

TEST_CASE("monic and canonical sign helpers") {
  const auto mu = mu3(2.0, 3.0, 5.0);
  const auto [m, s] = make_monic(LinearForm(mu, {0.0, 2.0, 4.0}));
  CHECK(same_linear(m, {0.0, 1.0, 2.0}));
  CHECK(near(s, 2.0));
  CHECK(same_linear(canonical_sign(LinearForm(mu, {0.0, -1.0, 3.0})), {0.0, 1.0, -3.0}));
  CHECK(same_linear(canonical_sign(LinearForm(mu, {Scalar{0.0, -1.0}, 1.0, 0.0})), {Scalar{0.0, 1.0}, -1.0, 0.0}));
}
