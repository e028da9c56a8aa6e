#pragma once

#include <cstdint>
#include <random>

#include "escort/polynomial.hpp"
#include "escort/types.hpp"

namespace escort {

using Rng = std::mt19937_64;

/// Uniform point in the open disk of radius r.
Complex random_in_disk(Rng& rng, Real r);

/// Random monic polynomial of degree d whose singular values (critical values and
/// p(0)) lie in D_rho, with radius spread over [0.1 rho, 0.999 rho).
MonicPolynomial random_map_with_sv_radius(Rng& rng, int degree, Real rho);

/// Largest |b_k| / rho^{(d-k)/d} over `count` random maps; the default L of the
/// coefficient check is this value plus one.
Real estimate_coefficient_constant(Rng& rng, int degree, Real rho, std::size_t count);

}  // namespace escort
