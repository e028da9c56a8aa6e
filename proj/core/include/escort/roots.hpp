#pragma once

#include <vector>

#include "escort/polynomial.hpp"
#include "escort/types.hpp"

namespace escort {

struct RootCluster {
  Complex value;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Complex> roots;          // d roots, with multiplicity
  std::vector<RootCluster> distinct;   // grouped at 1e-8 proximity
  Real max_residual = 0;               // max |p(z_i) - alpha|
  bool used_companion = false;
};

inline constexpr Real kMultiplicityTolerance = 1e-8L;

/// All roots of p(z) = alpha.
///
/// Aberth iteration on the rescaled polynomial, falling back to the
/// eigenvalues of the companion matrix. Each root is certified with
/// |p(z) - alpha| <= max(1e-10 * max(1, |alpha|), rounding floor); throws
/// ErrorKind::NonConvergence otherwise.
RootSet poly_roots(const MonicPolynomial& p, Complex alpha);

/// Roots of the monic polynomial with the given lower coefficients.
RootSet monic_roots(const std::vector<Complex>& lower);

}  // namespace escort
