#pragma once

#include <optional>
#include <vector>

#include "escort/address.hpp"
#include "escort/expoly.hpp"
#include "escort/potential.hpp"
#include "escort/types.hpp"

namespace escort {

struct RayPoint {
  ExternalAddress address;
  PotentialRep potential;
  /// Empty for symbolic-tail points (potential beyond the numeric range).
  std::optional<Complex> coordinate;
  Real residual = 0;
  /// Backward-iteration depth actually used.
  std::size_t depth = 0;

  bool symbolic() const { return !coordinate; }
  /// t + 2 pi i s_0 / d; the real part may be +inf for towers.
  Complex pinned() const;
};

/// Strip index s with Im z in (2 pi s/d - pi/d, 2 pi s/d + pi/d].
Symbol strip_index(Complex z, int degree);

/// Point of the dynamic ray with address a at potential t, found by iterating
/// inverse branches of g backward from F^N(t) + 2 pi i s_N / d. N is lowered
/// automatically until F^{N-1}(t) is numeric. Throws ErrorKind::NoRay or
/// ErrorKind::BranchAmbiguity.
RayPoint trace_ray(const ExpPolyMap& g, const ExternalAddress& a, const PotentialRep& t, std::size_t depth);

/// The whole backward chain z_0 .. z_N used by trace_ray (z_N is the seed).
std::vector<Complex> trace_chain(const ExpPolyMap& g, const ExternalAddress& a, const PotentialRep& t,
                                 std::size_t depth);

struct Classification {
  bool escaped = false;
  std::vector<Symbol> address;  // s_0 .. s_m read from strips
  PotentialRep potential;
  std::size_t iterations = 0;   // m, the deepest numeric iterate
};

/// Forward-iterates z until Re exceeds escape_re (at most `horizon` steps),
/// continues while iterates stay numeric, and reads the address and potential.
/// Throws ErrorKind::SingularCollision when an iterate hits a singular value.
Classification classify_orbit(const ExpPolyMap& g, Complex z, std::size_t horizon, Real escape_re = 50);

/// `count` points of the ray at geometrically spaced potentials in [t_lo, t_hi].
std::vector<RayPoint> ray_polyline(const ExpPolyMap& g, const ExternalAddress& a, const PotentialRep& t_lo,
                                   const PotentialRep& t_hi, std::size_t count, std::size_t depth);

}  // namespace escort
