#pragma once

#include <span>
#include <vector>

#include "escort/polynomial.hpp"
#include "escort/types.hpp"

namespace escort {

struct SolveResult {
  MonicPolynomial poly;
  std::vector<Complex> critical_points;  // c_k with p(c_k) = critical target k
  Real residual = 0;
  int newton_steps = 0;
};

/// Monic p of degree d with p(0) = asymptotic and critical values equal to
/// `critical` (exactly d - 1 targets). Targets are matched to the seed's
/// critical values by least total displacement, then reached by continuation
/// from the seed. Throws ErrorKind::SolverFailure.
SolveResult solve_poly_from_singular_data(Complex asymptotic, std::span<const Complex> critical, int degree,
                                          const MonicPolynomial& seed);

}  // namespace escort
