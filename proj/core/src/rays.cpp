#include "escort/rays.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "escort/error.hpp"
#include "escort/roots.hpp"

namespace escort {

namespace {

Real strip_center(Symbol s, int degree) { return kTwoPi * static_cast<Real>(s) / degree; }

std::string point(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << static_cast<double>(z.real()) << ',' << static_cast<double>(z.imag()) << ')';
  return os.str();
}

// Lifts of the distinct nonzero roots of p = w with Im in the strip of s.
std::vector<Complex> strip_lifts(const ExpPolyMap& g, Complex w, Symbol s) {
  const int d = g.degree();
  const Real lo = strip_center(s, d) - kPi / d;
  const Real hi = strip_center(s, d) + kPi / d;
  std::vector<Complex> out;
  for (const auto& c : poly_roots(g.poly(), w).distinct) {
    if (c.value == Complex(0)) continue;
    const Real arg = std::arg(c.value);
    const Real im = arg + kTwoPi * std::floor((hi - arg) / kTwoPi);
    if (im > lo) out.emplace_back(std::log(std::abs(c.value)), im);
  }
  return out;
}

// Entries of |z| beyond this carry no reliable imaginary part.
constexpr Real kReadableModulus = 1e15L;

}  // namespace

Complex RayPoint::pinned() const {
  return {potential.extended_value(), strip_center(address.entry(0), potential.degree())};
}

Symbol strip_index(Complex z, int degree) {
  return static_cast<Symbol>(std::ceil(z.imag() * degree / kTwoPi - Real(0.5)));
}

std::vector<Complex> trace_chain(const ExpPolyMap& g, const ExternalAddress& a, const PotentialRep& t,
                                 std::size_t depth) {
  const int d = g.degree();
  if (t.is_zero()) throw Error(ErrorKind::InvalidArgument, "ray potential must be positive");
  if (t.degree() != d) throw Error(ErrorKind::InvalidArgument, "potential degree differs from the map degree");
  if (a.depth() < depth + 1)
    throw Error(ErrorKind::InsufficientDepth,
                "tracing to depth " + std::to_string(depth) + " needs " + std::to_string(depth + 1) + " entries");
  const Real t0 = t.raw();
  while (depth > 0 && !grow(t, static_cast<int>(depth) - 1).raw_representable()) --depth;

  std::vector<Complex> chain(depth + 1);
  Real v = t0;
  for (std::size_t n = 0; n < depth; ++n) v = growth(v, d);
  chain[depth] = Complex(v, strip_center(a.entry(depth), d));
  for (std::size_t j = depth; j-- > 0;) {
    const Symbol s = a.entry(j);
    auto lifts = strip_lifts(g, chain[j + 1], s);
    if (lifts.empty())
      throw Error(ErrorKind::NoRay, "no preimage of " + point(chain[j + 1]) + " in strip " + std::to_string(s) +
                                        " at step " + std::to_string(j));
    std::sort(lifts.begin(), lifts.end(), [](Complex x, Complex y) { return x.real() > y.real(); });
    if (lifts.size() > 1 && lifts[0].real() - lifts[1].real() <= 1e-9L * std::max<Real>(1, std::fabs(lifts[0].real())))
      throw Error(ErrorKind::BranchAmbiguity,
                  "candidates " + point(lifts[0]) + " and " + point(lifts[1]) + " at step " + std::to_string(j));
    const Real edge = std::min(lifts[0].imag() - (strip_center(s, d) - kPi / d),
                               strip_center(s, d) + kPi / d - lifts[0].imag());
    if (edge <= 1e-12L * std::max<Real>(1, std::fabs(lifts[0].imag())))
      throw Error(ErrorKind::BranchAmbiguity, "candidate " + point(lifts[0]) + " sits on the strip boundary at step " +
                                                  std::to_string(j));
    chain[j] = lifts[0];
  }
  return chain;
}

RayPoint trace_ray(const ExpPolyMap& g, const ExternalAddress& a, const PotentialRep& t, std::size_t depth) {
  RayPoint rp;
  rp.address = a;
  rp.potential = t;
  if (!t.raw_representable()) {
    a.entry(0);
    return rp;
  }
  const auto chain = trace_chain(g, a, t, depth);
  rp.depth = chain.size() - 1;
  rp.coordinate = chain.front();
  const bool deeper = a.depth() > rp.depth + 1 && grow(t, static_cast<int>(rp.depth)).raw_representable();
  if (deeper) {
    rp.residual = std::abs(trace_chain(g, a, t, rp.depth + 1).front() - chain.front());
  } else {
    // No deeper numeric pass: the seed's own O(e^{-t/2}) offset bounds the
    // error, since inverse branches contract out here.
    rp.residual = std::exp(-chain.back().real() / 2);
  }
  return rp;
}

Classification classify_orbit(const ExpPolyMap& g, Complex z, std::size_t horizon, Real escape_re) {
  if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
  const int d = g.degree();
  const Real limit = representable_limit(d);
  escape_re = std::min(escape_re, limit);
  const auto sv = singular_values(g).all();
  Classification out;
  std::vector<Complex> orbit{z};
  auto step = [&] {
    const Complex next = g(orbit.back());
    for (const auto& v : sv)
      if (std::abs(next - v) <= 1e-10L)
        throw Error(ErrorKind::SingularCollision,
                    "iterate " + std::to_string(orbit.size()) + " lands on singular value " + point(v));
    orbit.push_back(next);
  };
  while (orbit.back().real() <= escape_re) {
    if (orbit.size() > horizon) return out;
    step();
  }
  while (orbit.back().real() <= limit) step();

  out.escaped = true;
  out.iterations = orbit.size() - 1;
  for (const auto& w : orbit) {
    if (std::abs(w) >= kReadableModulus) break;
    out.address.push_back(strip_index(w, d));
  }
  const auto deep = PotentialRep::from_raw(orbit.back().real(), d);
  out.potential = PotentialRep::from_level(deep.level() - static_cast<int>(out.iterations), deep.base(), d);
  return out;
}

std::vector<RayPoint> ray_polyline(const ExpPolyMap& g, const ExternalAddress& a, const PotentialRep& t_lo,
                                   const PotentialRep& t_hi, std::size_t count, std::size_t depth) {
  if (!(t_lo < t_hi)) throw Error(ErrorKind::PreconditionViolated, "ray_polyline needs t_lo < t_hi");
  if (count < 2) throw Error(ErrorKind::InvalidArgument, "ray_polyline needs at least 2 samples");
  const int d = g.degree();
  const Real lo = t_lo.raw();
  const Real hi = t_hi.raw();
  std::vector<RayPoint> out;
  for (std::size_t k = 0; k < count; ++k) {
    PotentialRep t = k == 0           ? t_lo
                     : k + 1 == count ? t_hi
                                      : PotentialRep::from_raw(lo * std::pow(hi / lo, static_cast<Real>(k) / (count - 1)), d);
    out.push_back(trace_ray(g, a, t, depth));
    if (k > 0) {
      const Real gap = std::fabs(out[k].coordinate->imag() - out[k - 1].coordinate->imag());
      if (gap >= kPi / d)
        throw Error(ErrorKind::BranchJump, "imaginary jump " + std::to_string(static_cast<double>(gap)) +
                                               " between samples " + std::to_string(k - 1) + " and " +
                                               std::to_string(k));
    }
  }
  return out;
}

}  // namespace escort
