#include "escort/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "escort/error.hpp"
#include "literal.hpp"

namespace escort {

namespace {

// Coefficients (ascending, leading included) of prod (z - r_k).
std::vector<Complex> expand_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{Complex(1)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace

MonicPolynomial MonicPolynomial::from_critical_points(std::span<const Complex> critical, Complex b0) {
  const auto q = expand_roots(critical);  // p'/d
  const Real d = static_cast<Real>(critical.size() + 1);
  std::vector<Complex> lower(critical.size() + 1);
  lower[0] = b0;
  for (std::size_t k = 0; k + 1 < q.size(); ++k) lower[k + 1] = d * q[k] / static_cast<Real>(k + 1);
  return MonicPolynomial(std::move(lower));
}

MonicPolynomial MonicPolynomial::from_roots(std::span<const Complex> roots) {
  auto c = expand_roots(roots);
  c.pop_back();
  return MonicPolynomial(std::move(c));
}

MonicPolynomial MonicPolynomial::parse(std::string_view literal) {
  auto s = detail::trim(literal);
  if (!s.starts_with("coeffs:")) throw Error(ErrorKind::Parse, "expected 'coeffs:[...]'");
  auto items = detail::split_list(s.substr(7));
  if (items.empty() || items.size() % 2)
    throw Error(ErrorKind::Parse, "polynomial literal needs a nonzero even number of reals");
  std::vector<Complex> lower;
  for (std::size_t i = 0; i < items.size(); i += 2)
    lower.emplace_back(detail::parse_real(items[i]), detail::parse_real(items[i + 1]));
  return MonicPolynomial(std::move(lower));
}

std::string MonicPolynomial::to_string() const {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  os << "coeffs:[";
  for (std::size_t k = 0; k < lower_.size(); ++k)
    os << (k ? "," : "") << lower_[k].real() << ',' << lower_[k].imag();
  os << ']';
  return os.str();
}

Complex MonicPolynomial::coefficient(int k) const {
  if (k == degree()) return Complex(1);
  if (k < 0 || k > degree()) throw Error(ErrorKind::InvalidArgument, "coefficient index out of range");
  return lower_[static_cast<std::size_t>(k)];
}

Complex MonicPolynomial::operator()(Complex z) const {
  Complex acc(1);
  for (auto it = lower_.rbegin(); it != lower_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex MonicPolynomial::derivative(Complex z) const {
  const int d = degree();
  Complex acc(static_cast<Real>(d));
  for (int k = d - 1; k >= 1; --k) acc = acc * z + static_cast<Real>(k) * lower_[static_cast<std::size_t>(k)];
  return acc;
}

Real MonicPolynomial::magnitude_sum(Real abs_z) const {
  Real acc = 1;
  for (auto it = lower_.rbegin(); it != lower_.rend(); ++it) acc = acc * abs_z + std::abs(*it);
  return acc;
}

std::vector<Complex> MonicPolynomial::normalized_derivative() const {
  const int d = degree();
  std::vector<Complex> out;
  for (int k = 1; k < d; ++k)
    out.push_back(static_cast<Real>(k) * lower_[static_cast<std::size_t>(k)] / static_cast<Real>(d));
  return out;
}

MonicPolynomial MonicPolynomial::shifted(Complex alpha) const {
  auto lower = lower_;
  if (!lower.empty()) lower[0] -= alpha;
  return MonicPolynomial(std::move(lower));
}

Real coefficient_distance(const MonicPolynomial& a, const MonicPolynomial& b) {
  if (a.degree() != b.degree()) throw Error(ErrorKind::InvalidArgument, "degree mismatch");
  Real m = 0;
  for (int k = 0; k < a.degree(); ++k) m = std::max(m, std::abs(a.coefficient(k) - b.coefficient(k)));
  return m;
}

}  // namespace escort
