#include "escort/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "escort/error.hpp"
#include "escort/roots.hpp"

namespace escort {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

Real min_pairwise(const std::vector<Complex>& pts) {
  Real m = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::min(m, std::abs(pts[i] - pts[j]));
  return m;
}

std::string num(Real x) {
  std::ostringstream os;
  os << static_cast<double>(x);
  return os.str();
}

}  // namespace

CoeffReport check_coeff_bounds(const MonicPolynomial& p, Real rho, Real L) {
  if (!(rho > 0) || !(L > 0)) throw Error(ErrorKind::InvalidArgument, "rho and L must be positive");
  CoeffReport rep;
  rep.sv_radius = singular_values(ExpPolyMap(p)).radius;
  if (rep.sv_radius >= rho)
    throw Error(ErrorKind::PreconditionViolated,
                "singular values reach radius " + num(rep.sv_radius) + " >= rho = " + num(rho));
  const int d = p.degree();
  rep.pass = true;
  for (int k = 0; k < d; ++k) {
    CoeffBound c;
    c.k = k;
    c.magnitude = std::abs(p.coefficient(k));
    c.bound = L * std::pow(rho, static_cast<Real>(d - k) / d);
    c.ratio = c.magnitude == 0 ? kInf : c.bound / c.magnitude;
    c.pass = c.magnitude < c.bound;
    rep.pass = rep.pass && c.pass;
    rep.coefficients.push_back(c);
  }
  return rep;
}

OuterDiskReport check_outer_disk(const MonicPolynomial& p, Real rho, Real r, std::size_t samples) {
  if (!(r >= rho)) throw Error(ErrorKind::InvalidArgument, "outer radius must be >= rho");
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  OuterDiskReport rep;
  rep.radius = r;
  rep.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const Complex alpha = std::polar(r, kTwoPi * static_cast<Real>(i) / static_cast<Real>(samples));
    for (const auto& z : poly_roots(p, alpha).roots) rep.max_root_modulus = std::max(rep.max_root_modulus, std::abs(z));
  }
  rep.pass = rep.max_root_modulus <= r * (1 + 1e-12L);
  rep.below_threshold = !rep.pass;
  return rep;
}

Real separation_constant(int degree) {
  const Real d = degree;
  return std::exp(d * std::log(d) - (d * (d - 1) - 1) * std::log(Real(2)));
}

SeparationReport root_separation(const MonicPolynomial& p, Complex alpha, Real eps, Real r) {
  if (!(eps > 0 && eps <= 1) || !(r > 1))
    throw Error(ErrorKind::InvalidArgument, "need eps in (0,1] and r > 1");
  const auto roots = poly_roots(p, alpha).roots;
  SeparationReport rep;
  for (const auto& z : roots)
    if (std::abs(z) >= r)
      throw Error(ErrorKind::PreconditionViolated, "root of modulus " + num(std::abs(z)) + " outside D_r");
  std::vector<Complex> crit;
  if (p.degree() > 1) crit = monic_roots(p.normalized_derivative()).roots;
  rep.min_crit_distance = kInf;
  for (const auto& z : roots)
    for (const auto& c : crit) rep.min_crit_distance = std::min(rep.min_crit_distance, std::abs(z - c));
  if (rep.min_crit_distance < eps * (1 - 1e-12L))
    throw Error(ErrorKind::PreconditionViolated,
                "roots come within " + num(rep.min_crit_distance) + " of a critical point (eps = " + num(eps) + ")");
  const Real d = p.degree();
  rep.actual_min = min_pairwise(roots);
  rep.bound = separation_constant(p.degree()) * std::pow(eps / r, d * d);
  rep.pass = rep.actual_min > rep.bound;
  return rep;
}

SeparationReport fiber_separation(const ExpPolyMap& g, Complex alpha, Real eps, Real rho, ImWindow window) {
  if (g.degree() < 2) throw Error(ErrorKind::PreconditionViolated, "fiber separation needs d > 1");
  if (!(eps > 0) || !(rho > 0)) throw Error(ErrorKind::InvalidArgument, "eps and rho must be positive");
  const auto sd = singular_values(g);
  if (sd.radius >= rho)
    throw Error(ErrorKind::PreconditionViolated, "singular values reach radius " + num(sd.radius));
  if (std::abs(alpha) >= 2 * rho) throw Error(ErrorKind::PreconditionViolated, "alpha outside D_{2 rho}");
  SeparationReport rep;
  rep.min_crit_distance = kInf;
  for (const auto& v : sd.all()) rep.min_crit_distance = std::min(rep.min_crit_distance, std::abs(alpha - v));
  if (rep.min_crit_distance <= eps)
    throw Error(ErrorKind::PreconditionViolated,
                "alpha within " + num(rep.min_crit_distance) + " of a singular value (eps = " + num(eps) + ")");
  const Real d = g.degree();
  rep.actual_min = min_pairwise(preimages(g, alpha, window));
  rep.bound = std::pow(eps / rho, d * d * d * d);
  rep.pass = rep.actual_min > rep.bound;
  return rep;
}

}  // namespace escort
