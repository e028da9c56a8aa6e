#pragma once

#include <compare>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "escort/types.hpp"

namespace escort {

/// F(t) = exp(d t) - 1.
inline Real growth(Real t, int degree) { return std::expm1(static_cast<Real>(degree) * t); }

/// Inverse of growth() on [0, inf).
inline Real growth_inverse(Real t, int degree) { return std::log1p(t) / static_cast<Real>(degree); }

/// log F'(t) = log d + d t.
inline Real log_growth_derivative(Real t, int degree) {
  return std::log(static_cast<Real>(degree)) + static_cast<Real>(degree) * t;
}

/// Potential stored as F^level(base) with base in the window [1, F(1)).
///
/// Values below 1 carry negative levels; zero (the fixed point of F) has its own
/// marker. Ordering is lexicographic on (level, base) and agrees with the
/// numeric order of the represented values, so towers like F^5(1) compare and
/// grow without ever materializing.
class PotentialRep {
 public:
  PotentialRep() = default;

  static PotentialRep from_raw(Real value, int degree);
  static PotentialRep from_level(int level, Real base, int degree);

  /// Parses "raw:<float>" or "lvl:<int>,base:<float>".
  static PotentialRep parse(std::string_view literal, int degree);
  std::string to_string() const;

  int degree() const { return degree_; }
  int level() const { return level_; }
  Real base() const { return base_; }
  bool is_zero() const { return zero_; }

  /// True when the value is at most representable_limit(d).
  bool raw_representable() const;
  /// Numeric value; throws ErrorKind::OutOfRange above representable_limit(d).
  Real raw() const;
  /// Numeric value without the limit (may be +inf).
  Real extended_value() const;

  /// Same level, bases within tol.
  bool same_as(const PotentialRep& other, Real tol = 1e-12L) const;

  std::strong_ordering operator<=>(const PotentialRep& other) const;
  bool operator==(const PotentialRep& other) const { return (*this <=> other) == 0; }

 private:
  int degree_ = 1;
  int level_ = 0;
  Real base_ = 1;
  bool zero_ = true;
};

/// F^n(t); the level advances by exactly n.
PotentialRep grow(const PotentialRep& t, int n);

/// F^{-1}(t); throws ErrorKind::InvalidArgument for zero.
PotentialRep shrink(const PotentialRep& t);

/// Sorted distinct potentials t_i and their midpoints (t_i + t_{i+1}) / 2.
class PotentialGrid {
 public:
  explicit PotentialGrid(std::vector<Real> potentials);

  const std::vector<Real>& potentials() const { return potentials_; }
  const std::vector<Real>& midpoints() const { return midpoints_; }

  /// Index n with midpoints()[n] == rho (within 1e-12 relative); nullopt otherwise.
  std::optional<std::size_t> midpoint_index(Real rho) const;

 private:
  std::vector<Real> potentials_;
  std::vector<Real> midpoints_;
};

}  // namespace escort
