#pragma once

// Independent checks: re-expansion of witnesses through skew-ring
// multiplication only, the classical rank at mu = 1, seeded instance
// generators, and the self-test harness that runs every module property.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "skewform/rank_factor.hpp"

namespace skewform::oracle {

struct CaseReport {
  std::uint64_t seed = 0;
  std::string description;
  bool passed = true;
  double max_residual = 0.0;
  /// Input/output snapshot in the text notation.
  std::string payload;
};

/// Expands `f` with skew_ring multiplication (never the closed forms) and
/// compares against q. passed iff the scaled residual is <= threshold.
CaseReport verify_factorization(const QuadraticForm& q, const Factorization& f,
                                double threshold = kDefaultTolerance);

/// Rank of a symmetric matrix in the mu = 1 context, counting singular
/// values above tol * (largest singular value). Throws InputError if mu is
/// not all ones or the matrix is not symmetric.
int classical_rank(const MuSymmetricMatrix& m, Tolerance tol = {});

enum class PlantMode { Zero, Square, Product, SumOfProducts, Dense };
enum class MuMode { Generic, Commutative, Twist, EqualM12M13, M12NegOne, M13NegOne, BothNegOne, Special };

struct InstanceSpec {
  std::size_t n = 3;
  PlantMode mode = PlantMode::Dense;
  MuMode mu_mode = MuMode::Generic;
  double magnitude = 1.0;
  /// Bit k zeroes the k-th upper coefficient (alpha_11, alpha_12, ...) of
  /// Dense instances.
  unsigned zero_mask = 0;
};

struct PlantedTruth {
  PlantMode mode = PlantMode::Dense;
  /// Known rank: exact for Zero and Square; for Product and SumOfProducts
  /// exact only in the commutative context with independent factors.
  std::optional<int> exact_rank;
  int max_rank = 3;
  std::vector<LinearForm> factors;
};

struct Instance {
  std::uint64_t seed = 0;
  MuMatrix mu;
  QuadraticForm q;
  PlantedTruth truth;
};

/// Deterministic RNG with platform-independent scalar draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  std::size_t below(std::size_t n);
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  Scalar scalar(double magnitude = 1.0);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

MuMatrix random_mu(Rng& rng, std::size_t n, MuMode mode);
LinearForm random_linear(Rng& rng, const MuMatrix& mu, double magnitude = 1.0);
QuadraticForm random_form(Rng& rng, const MuMatrix& mu, double magnitude = 1.0);

/// Stream of instances; the same seed and spec always give the same stream.
class InstanceStream {
 public:
  InstanceStream(std::uint64_t seed, InstanceSpec spec);
  Instance next();

 private:
  std::uint64_t seed_;
  std::uint64_t index_ = 0;
  InstanceSpec spec_;
};

/// Per-case seed derivation (splitmix64 of base and index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct PropertyTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
};

struct SelftestSummary {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<PropertyTally> properties;
  /// Failing cases sorted by (seed, description).
  std::vector<CaseReport> failures;

  [[nodiscard]] std::size_t failure_count() const { return failures.size(); }
};

/// Names of every property the self-test runs, in order.
std::vector<std::string> property_names();

/// Runs every module property on `count` derived seeds.
SelftestSummary selftest(std::uint64_t seed, std::size_t count, Tolerance tol = {});

}  // namespace skewform::oracle
