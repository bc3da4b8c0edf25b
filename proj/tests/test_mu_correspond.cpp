#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewform/errors.hpp"
#include "skewform/mu_correspond.hpp"
#include "skewform/oracle.hpp"
#include "test_util.hpp"

using namespace skewform;
using testutil::gap;
using testutil::mu2;
using testutil::mu3;
using testutil::near;

TEST_CASE("matrix of z1^2 + 6 z1 z2 + 4 z2^2 at mu_12 = 2") {
  const auto mu = mu2(2.0);
  const auto m = form_to_matrix(QuadraticForm(mu, {1.0, 6.0, 4.0}));
  CHECK(near(m(0, 0), 1.0));
  CHECK(near(m(0, 1), 3.0));
  CHECK(near(m(1, 0), 1.5));
  CHECK(near(m(1, 1), 4.0));
  CHECK_FALSE(m.asymmetry().has_value());
}

TEST_CASE("named coefficients survive the correspondence") {
  const auto mu = mu3(Scalar{0.0, 1.0}, 2.0, -1.0);
  const Coeffs3 c{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const auto m = form_to_matrix(QuadraticForm::from_coeffs(mu, c));
  const auto back = m.coeffs3();
  CHECK(near(back.a, 1.0));
  CHECK(near(back.b, 2.0));
  CHECK(near(back.c, 3.0));
  CHECK(near(back.d, 4.0));
  CHECK(near(back.e, 5.0));
  CHECK(near(back.f, 6.0));
  CHECK(near(m(1, 0), mu(1, 0) * 4.0));
}

TEST_CASE("round trips on random forms and matrices") {
  oracle::Rng rng(3);
  for (int k = 0; k < 300; ++k) {
    const auto mu = oracle::random_mu(rng, 2 + rng.below(3), oracle::MuMode::Generic);
    const auto q = oracle::random_form(rng, mu);
    const auto m = form_to_matrix(q);
    CHECK_FALSE(m.asymmetry().has_value());
    CHECK(gap(matrix_to_form(m), q) < 1e-14);
  }
}

TEST_CASE("mu = 1 gives symmetric matrices") {
  oracle::Rng rng(5);
  const auto q = oracle::random_form(rng, MuMatrix::identity(3));
  const auto m = form_to_matrix(q);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j) == m(j, i));
}

TEST_CASE("non mu-symmetric input names the pair") {
  const auto mu = mu3(2.0, 1.0, 1.0);
  const MuSymmetricMatrix bad(mu, {1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0});
  REQUIRE(bad.asymmetry().has_value());
  CHECK(bad.asymmetry()->first == 0);
  CHECK(bad.asymmetry()->second == 1);
  try {
    (void)matrix_to_form(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("(1, 2)") != std::string::npos);
  }
}

TEST_CASE("near mu-symmetric input is accepted") {
  const auto mu = mu2(2.0);
  const MuSymmetricMatrix m(mu, {1.0, 3.0, 1.5 + 1e-12, 4.0});
  const auto q = matrix_to_form(m);
  CHECK(near(q.alpha(0, 1), 6.0, 1e-11));
}

TEST_CASE("correspondence is linear") {
  oracle::Rng rng(9);
  const auto mu = mu3(Scalar{0.6, 0.8}, 3.0, -2.0);
  const auto q1 = oracle::random_form(rng, mu);
  const auto q2 = oracle::random_form(rng, mu);
  const Scalar s{1.5, -0.25};
  const auto lhs = form_to_matrix(q1.scaled(s) + q2);
  const auto m1 = form_to_matrix(q1);
  const auto m2 = form_to_matrix(q2);
  for (std::size_t k = 0; k < 9; ++k) CHECK(near(lhs.entries()[k], s * m1.entries()[k] + m2.entries()[k]));
}
