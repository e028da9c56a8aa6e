#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "escort/types.hpp"

namespace escort {

/// z^d + b_{d-1} z^{d-1} + ... + b_0 with the leading coefficient implicit.
class MonicPolynomial {
 public:
  MonicPolynomial() = default;
  explicit MonicPolynomial(std::vector<Complex> lower) : lower_(std::move(lower)) {}

  /// Monic p with p'(z) = d * prod (z - c_k) and p(0) = b0; degree = |critical| + 1.
  static MonicPolynomial from_critical_points(std::span<const Complex> critical, Complex b0);
  static MonicPolynomial from_roots(std::span<const Complex> roots);

  /// "coeffs:[b0_re,b0_im,b1_re,b1_im,...]"; degree = number of pairs.
  static MonicPolynomial parse(std::string_view literal);
  std::string to_string() const;

  int degree() const { return static_cast<int>(lower_.size()); }
  /// b_k for k < d, 1 for k == d.
  Complex coefficient(int k) const;
  const std::vector<Complex>& lower() const { return lower_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// Sum |b_k| |z|^k including the leading term; scale for rounding estimates.
  Real magnitude_sum(Real abs_z) const;

  /// Lower coefficients of p'(z) / d (itself monic of degree d - 1).
  std::vector<Complex> normalized_derivative() const;

  MonicPolynomial shifted(Complex alpha) const;  // p - alpha

  friend bool operator==(const MonicPolynomial&, const MonicPolynomial&) = default;

 private:
  std::vector<Complex> lower_;
};

/// Max |b_k - c_k| over the lower coefficients; degrees must match.
Real coefficient_distance(const MonicPolynomial& a, const MonicPolynomial& b);

}  // namespace escort
