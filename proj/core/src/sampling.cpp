#include "escort/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "escort/error.hpp"
#include "escort/expoly.hpp"

namespace escort {

Complex random_in_disk(Rng& rng, Real r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Real radius = r * std::sqrt(static_cast<Real>(u(rng)));
  return std::polar(radius, kTwoPi * static_cast<Real>(u(rng)));
}

MonicPolynomial random_map_with_sv_radius(Rng& rng, int degree, Real rho) {
  if (degree < 1 || !(rho > 0)) throw Error(ErrorKind::InvalidArgument, "need d >= 1 and rho > 0");
  std::uniform_real_distribution<double> spread(0.1, 0.999);
  for (;;) {
    std::vector<Complex> crit;
    for (int i = 0; i + 1 < degree; ++i) crit.push_back(random_in_disk(rng, 1));
    const auto q = MonicPolynomial::from_critical_points(crit, random_in_disk(rng, 1));
    const Real radius = singular_values(ExpPolyMap(q)).radius;
    if (radius < 1e-6L) continue;
    // p(z) = lambda^d q(z / lambda) is monic and scales every singular value by lambda^d.
    const Real lambda_d = rho * static_cast<Real>(spread(rng)) / radius;
    const Real lambda = std::pow(lambda_d, Real(1) / degree);
    std::vector<Complex> lower(q.lower());
    for (int k = 0; k < degree; ++k) lower[k] *= std::pow(lambda, static_cast<Real>(degree - k));
    return MonicPolynomial(std::move(lower));
  }
}

Real estimate_coefficient_constant(Rng& rng, int degree, Real rho, std::size_t count) {
  Real worst = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto p = random_map_with_sv_radius(rng, degree, rho);
    for (int k = 0; k < degree; ++k)
      worst = std::max(worst, std::abs(p.coefficient(k)) / std::pow(rho, static_cast<Real>(degree - k) / degree));
  }
  return worst;
}

}  // namespace escort
