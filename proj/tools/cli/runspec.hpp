#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "escort/address.hpp"
#include "escort/polynomial.hpp"
#include "escort/potential.hpp"

namespace escort::cli {

inline const std::vector<std::string> kCommands = {"trace-ray", "classify",      "clusters", "solve",
                                                   "check-invariant", "verify-bounds", "plot"};

/// Parsed run file. One `key = value` per line, `#` starts a comment;
/// `address` and `potential` repeat once per orbit.
struct RunSpec {
  std::string command;
  int degree = 1;
  std::optional<MonicPolynomial> polynomial;
  std::vector<ExternalAddress> addresses;
  std::vector<PotentialRep> potentials;
  std::optional<PotentialRep> t_hi;  // trace-ray: upper end of a polyline
  int count = 16;
  int trace_depth = 8;
  int numeric_depth = 8;
  int total_depth = 10;
  Real tolerance = 1e-9L;
  int max_iter = 60;
  Real A = 2;
  Real C = 16;
  std::optional<Real> L;
  std::optional<Real> K;
  std::optional<Real> rho;
  int samples = 100;
  std::uint64_t seed = 1;
  Complex point;
  int horizon = 50;
  Real escape_re = 50;

  /// The polynomial, or z^d when none was given.
  MonicPolynomial map_polynomial() const;
  bool operator==(const RunSpec& other) const;
};

/// Throws Error(Parse) with the line number, or Error(Validation) listing every
/// semantic problem.
RunSpec parse_spec(std::string_view text);
std::string print_spec(const RunSpec& spec);

}  // namespace escort::cli
