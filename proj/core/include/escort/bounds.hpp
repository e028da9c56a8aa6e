#pragma once

#include <vector>

#include "escort/expoly.hpp"
#include "escort/polynomial.hpp"
#include "escort/types.hpp"

namespace escort {

struct CoeffBound {
  int k = 0;
  Real magnitude = 0;  // |b_k|
  Real bound = 0;      // L rho^{(d-k)/d}
  Real ratio = 0;      // bound / magnitude, inf when b_k = 0
  bool pass = false;
};

struct CoeffReport {
  Real sv_radius = 0;
  std::vector<CoeffBound> coefficients;
  bool pass = false;
};

/// |b_k| < L rho^{(d-k)/d} for every k. Throws ErrorKind::PreconditionViolated
/// when the singular values are not inside D_rho.
CoeffReport check_coeff_bounds(const MonicPolynomial& p, Real rho, Real L);

struct OuterDiskReport {
  Real max_root_modulus = 0;
  Real radius = 0;
  std::size_t samples = 0;
  bool pass = false;
  /// Set when the check fails for rho below the (unquantified) threshold.
  bool below_threshold = false;
};

/// Samples |alpha| = r and checks every root of p = alpha stays in the closed
/// disk of radius r (up to 1e-12 relative).
OuterDiskReport check_outer_disk(const MonicPolynomial& p, Real rho, Real r, std::size_t samples);

struct SeparationReport {
  Real actual_min = 0;
  Real bound = 0;
  Real min_crit_distance = 0;  // distance from the roots to Crit(p)
  bool pass = false;
};

/// d^d / 2^{d(d-1)-1}.
Real separation_constant(int degree);

/// Minimal pairwise distance between roots of p = alpha against K (eps/r)^{d^2}.
/// Throws ErrorKind::PreconditionViolated if a root lies outside D_r or within
/// eps of a critical point.
SeparationReport root_separation(const MonicPolynomial& p, Complex alpha, Real eps, Real r);

/// Minimal distance between distinct preimages of alpha in the window against
/// (eps/rho)^{d^4}.
SeparationReport fiber_separation(const ExpPolyMap& g, Complex alpha, Real eps, Real rho, ImWindow window);

}  // namespace escort
