#pragma once

#include <span>
#include <vector>

#include "escort/polynomial.hpp"
#include "escort/roots.hpp"
#include "escort/types.hpp"

namespace escort {

/// g(z) = p(e^z) for a monic polynomial p of degree d.
class ExpPolyMap {
 public:
  ExpPolyMap() = default;
  explicit ExpPolyMap(MonicPolynomial p) : poly_(std::move(p)) {}

  const MonicPolynomial& poly() const { return poly_; }
  int degree() const { return poly_.degree(); }

  /// p(e^z); throws ErrorKind::OutOfRange when Re z > representable_limit(d).
  Complex operator()(Complex z) const;
  /// g'(z) = p'(e^z) e^z; same range rule.
  Complex derivative(Complex z) const;

 private:
  MonicPolynomial poly_;
};

struct SingularData {
  std::vector<Complex> critical_points;  // roots of p', with multiplicity (d - 1)
  std::vector<Complex> critical_values;  // p at each critical point
  Complex asymptotic_value;              // p(0)
  Real radius = 0;                       // max modulus over all singular values

  std::vector<Complex> all() const;
};

SingularData singular_values(const ExpPolyMap& g);

/// Half-open window [lo, hi) of imaginary parts.
struct ImWindow {
  Real lo = -kPi;
  Real hi = kPi;
};

/// Every z with g(z) = w and Im z in the window, one per distinct nonzero root
/// r of p = w and shift 2 pi k. Throws ErrorKind::DegenerateFiber when w is
/// within 1e-12 of the asymptotic value.
std::vector<Complex> preimages(const ExpPolyMap& g, Complex w, ImWindow window);

/// Analytic continuation of the branch of g^{-1} through `seed` along the
/// polyline `path` (g(seed) must equal path.front()). Throws
/// ErrorKind::ContinuationAbort when the path comes within `margin` of a
/// singular value.
Complex continue_branch(const ExpPolyMap& g, std::span<const Complex> path, Complex seed, Real margin = 1e-6L);

}  // namespace escort
