#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewform/skew_ring.hpp"

namespace skewform::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kVerificationError = 2 };

struct MuConfig {
  MuMatrix mu = MuMatrix::identity(2);
  std::optional<double> tolerance;
};

/// Reads a MuConfig from JSON text:
///   {"n": 3, "mu": [[1, 2, [0, 1]], ...], "tolerance": 1e-9}
/// Entries are numbers or [re, im] pairs. "mu" may instead be an object of
/// upper entries keyed "ij" (1-based), e.g. {"12": 2}; missing ones are 1.
MuConfig parse_mu_config(const std::string& json_text);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewform::cli
