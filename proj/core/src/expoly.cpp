#include "escort/expoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "escort/error.hpp"

namespace escort {

namespace {

void check_range(Complex z, int degree) {
  if (!(z.real() <= representable_limit(degree))) {
    std::ostringstream os;
    os << "Re z = " << static_cast<double>(z.real()) << " beyond " << static_cast<double>(representable_limit(degree));
    throw Error(ErrorKind::OutOfRange, os.str());
  }
}

Real segment_distance(Complex a, Complex b, Complex q) {
  const Complex ab = b - a;
  const Real len2 = std::norm(ab);
  if (len2 == 0) return std::abs(q - a);
  Real s = std::clamp<Real>(((q - a) * std::conj(ab)).real() / len2, 0, 1);
  return std::abs(a + s * ab - q);
}

}  // namespace

Complex ExpPolyMap::operator()(Complex z) const {
  check_range(z, degree());
  return poly_(std::exp(z));
}

Complex ExpPolyMap::derivative(Complex z) const {
  check_range(z, degree());
  const Complex e = std::exp(z);
  return poly_.derivative(e) * e;
}

std::vector<Complex> SingularData::all() const {
  std::vector<Complex> out{asymptotic_value};
  out.insert(out.end(), critical_values.begin(), critical_values.end());
  return out;
}

SingularData singular_values(const ExpPolyMap& g) {
  SingularData sd;
  sd.asymptotic_value = g.poly()(Complex(0));
  sd.radius = std::abs(sd.asymptotic_value);
  if (g.degree() > 1) {
    sd.critical_points = monic_roots(g.poly().normalized_derivative()).roots;
    for (const auto& c : sd.critical_points) {
      sd.critical_values.push_back(g.poly()(c));
      sd.radius = std::max(sd.radius, std::abs(sd.critical_values.back()));
    }
  }
  return sd;
}

std::vector<Complex> preimages(const ExpPolyMap& g, Complex w, ImWindow window) {
  const Complex asym = g.poly()(Complex(0));
  if (std::abs(w - asym) <= 1e-12L)
    throw Error(ErrorKind::DegenerateFiber, "target coincides with the asymptotic value");
  if (!(window.hi > window.lo) || !std::isfinite(window.hi - window.lo))
    throw Error(ErrorKind::InvalidArgument, "imaginary window must be finite and nonempty");
  std::vector<Complex> out;
  for (const auto& cluster : poly_roots(g.poly(), w).distinct) {
    if (cluster.value == Complex(0)) continue;
    const Real re = std::log(std::abs(cluster.value));
    const Real arg = std::arg(cluster.value);
    auto k = static_cast<long long>(std::ceil((window.lo - arg) / kTwoPi));
    for (Real im = arg + kTwoPi * static_cast<Real>(k); im < window.hi; im += kTwoPi)
      if (im >= window.lo) out.emplace_back(re, im);
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  return out;
}

Complex continue_branch(const ExpPolyMap& g, std::span<const Complex> path, Complex seed, Real margin) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty continuation path");
  if (std::abs(g(seed) - path.front()) > 1e-8L * std::max<Real>(1, std::abs(path.front())))
    throw Error(ErrorKind::InvalidArgument, "seed is not a preimage of the path start");
  const auto sv = singular_values(g).all();
  auto clearance = [&](Complex w) {
    Real m = std::numeric_limits<Real>::infinity();
    for (const auto& v : sv) m = std::min(m, std::abs(w - v));
    return m;
  };
  for (std::size_t i = 0; i + 1 < path.size() || i == 0; ++i) {
    const Complex a = path[i];
    const Complex b = i + 1 < path.size() ? path[i + 1] : a;
    for (const auto& v : sv) {
      if (segment_distance(a, b, v) < margin) {
        std::ostringstream os;
        os << "path segment " << i << " passes within " << static_cast<double>(segment_distance(a, b, v))
           << " of singular value (" << static_cast<double>(v.real()) << ',' << static_cast<double>(v.imag())
           << ')';
        throw Error(ErrorKind::ContinuationAbort, os.str());
      }
    }
    if (i + 1 >= path.size()) break;
  }

  Complex z = seed;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Complex a = path[i];
    const Complex b = path[i + 1];
    Real s = 0;
    while (s < 1) {
      const Complex w0 = a + s * (b - a);
      Real h = std::min<Real>(1 - s, 0.25L * clearance(w0) / std::max<Real>(std::abs(b - a), 1e-300L));
      bool accepted = false;
      for (int attempt = 0; attempt < 60 && !accepted; ++attempt, h /= 2) {
        const Real s1 = s + h;
        const Complex w1 = s1 >= 1 ? b : a + s1 * (b - a);
        Complex zn = z + (w1 - w0) / g.derivative(z);
        bool converged = false;
        for (int it = 0; it < 12; ++it) {
          const Complex step = (g(zn) - w1) / g.derivative(zn);
          zn -= step;
          if (std::abs(step) <= 1e-16L * std::max<Real>(1, std::abs(zn))) {
            converged = true;
            break;
          }
        }
        // Reject steps that landed on another sheet: z moves ~|dw / g'|.
        const Real predicted = std::abs(w1 - w0) / std::abs(g.derivative(z));
        if (converged && std::abs(zn - z) <= 3 * predicted + 1e-14L) {
          z = zn;
          s = s1;
          accepted = true;
        }
      }
      if (!accepted) throw Error(ErrorKind::ContinuationAbort, "step size underflow during continuation");
    }
  }
  return z;
}

}  // namespace escort
