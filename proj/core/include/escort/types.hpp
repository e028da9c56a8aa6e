#pragma once

#include <complex>
#include <numbers>

namespace escort {

// Extended precision throughout: clustered marked points differ by amounts far
// below double resolution relative to their modulus.
using Real = long double;
using Complex = std::complex<Real>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Real kTwoPi = 2 * std::numbers::pi_v<Real>;

// Largest real part at which p(e^z) is still evaluated numerically, times d.
// Potentials above kOverflowRe / d are handled symbolically.
inline constexpr Real kOverflowRe = 650;

inline Real representable_limit(int degree) { return kOverflowRe / static_cast<Real>(degree); }

}  // namespace escort
