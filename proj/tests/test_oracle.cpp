#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewform/errors.hpp"
#include "skewform/form_parser.hpp"
#include "skewform/oracle.hpp"
#include "test_util.hpp"

using namespace skewform;
using namespace skewform::oracle;
using testutil::mu2;

TEST_CASE("verification accepts true and rejects false witnesses") {
  const auto mu = mu2(2.0);
  const QuadraticForm q(mu, {1.0, 6.0, 4.0});
  const Factorization good{mu, Square{LinearForm(mu, {1.0, 2.0})}, std::nullopt, std::nullopt, 0.0};
  const Factorization product{mu, Product{LinearForm(mu, {1.0, 1.0}), LinearForm(mu, {1.0, 4.0})}, std::nullopt,
                              std::nullopt, 0.0};
  // Right factors in the commutative order, wrong here: (z1 + 4 z2)(z1 + z2) = z1^2 + 9 z1 z2 + 4 z2^2.
  const Factorization swapped{mu, Product{LinearForm(mu, {1.0, 4.0}), LinearForm(mu, {1.0, 1.0})}, std::nullopt,
                              std::nullopt, 0.0};
  CHECK(verify_factorization(q, good).passed);
  CHECK(verify_factorization(q, product).passed);
  const auto bad = verify_factorization(q, swapped);
  CHECK_FALSE(bad.passed);
  CHECK(bad.max_residual == doctest::Approx(3.0 / 6.0));
}

TEST_CASE("classical rank") {
  const auto one = MuMatrix::identity(3);
  CHECK(classical_rank(MuSymmetricMatrix(one, {1, 0, 0, 0, 1, 0, 0, 0, 1})) == 3);
  CHECK(classical_rank(MuSymmetricMatrix(one, {1, 2, 3, 2, 4, 6, 3, 6, 9})) == 1);
  CHECK(classical_rank(MuSymmetricMatrix(one, std::vector<Scalar>(9))) == 0);
  CHECK_THROWS_AS(classical_rank(MuSymmetricMatrix(one, {1, 2, 0, 0, 1, 0, 0, 0, 1})), InputError);
  CHECK_THROWS_AS(classical_rank(form_to_matrix(QuadraticForm(mu2(2.0), {1.0, 1.0, 1.0}))), InputError);
}

TEST_CASE("instance streams are deterministic") {
  const InstanceSpec spec{3, PlantMode::Product, MuMode::Generic, 2.0, 0};
  InstanceStream a(99, spec);
  InstanceStream b(99, spec);
  for (int k = 0; k < 20; ++k) {
    const auto x = a.next();
    const auto y = b.next();
    CHECK(x.seed == y.seed);
    CHECK(print(x.q) == print(y.q));
    CHECK(x.truth.factors.size() == 2);
  }
}

TEST_CASE("planted truth matches the commutative rank") {
  for (auto mode : {PlantMode::Zero, PlantMode::Square, PlantMode::Product, PlantMode::SumOfProducts}) {
    InstanceStream s(5, {3, mode, MuMode::Commutative, 1.0, 0});
    for (int k = 0; k < 50; ++k) {
      const auto inst = s.next();
      REQUIRE(inst.truth.exact_rank.has_value());
      CHECK(classical_rank(form_to_matrix(inst.q)) == *inst.truth.exact_rank);
    }
  }
}

TEST_CASE("mu modes honour their constraints") {
  Rng rng(17);
  for (int k = 0; k < 50; ++k) {
    const auto t = random_mu(rng, 3, MuMode::Twist);
    CHECK(is_twist_of_polynomial_ring(t));
    const auto e = random_mu(rng, 3, MuMode::EqualM12M13);
    CHECK(e(0, 1) == e(0, 2));
    const auto both = random_mu(rng, 3, MuMode::BothNegOne);
    CHECK(both(0, 1) == Scalar{-1.0});
    CHECK(both(0, 2) == Scalar{-1.0});
  }
}

TEST_CASE("dense zero mask") {
  InstanceStream s(1, {3, PlantMode::Dense, MuMode::Generic, 1.0, 0b000111});
  const auto q = s.next().q;
  CHECK(q.alpha(0, 0) == Scalar{});
  CHECK(q.alpha(0, 1) == Scalar{});
  CHECK(q.alpha(0, 2) == Scalar{});
  CHECK(q.alpha(1, 1) != Scalar{});
  CHECK_THROWS_AS(InstanceStream(1, {2, PlantMode::Dense, MuMode::Generic, 1.0, 0b1000}), InputError);
}

TEST_CASE("selftest runs every property and is reproducible") {
  const auto a = selftest(42, 30);
  const auto b = selftest(42, 30);
  CHECK(a.failure_count() == 0);
  CHECK(a.properties.size() == property_names().size());
  for (const auto& p : a.properties) CHECK(p.checked == 30);
  REQUIRE(a.properties.size() == b.properties.size());
  const auto empty = selftest(42, 0);
  CHECK(empty.failure_count() == 0);
  for (const auto& p : empty.properties) CHECK(p.checked == 0);
}

TEST_CASE("derived seeds differ per index") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}
