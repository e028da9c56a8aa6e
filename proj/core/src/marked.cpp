#include "escort/marked.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "escort/error.hpp"
#include "escort/rays.hpp"

namespace escort {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr int kMaxHorizon = 100000;
constexpr std::size_t kTraceDepth = 8;

std::string id_string(PointId p) { return "a(" + std::to_string(p.orbit) + "," + std::to_string(p.step) + ")"; }

void check_inputs(const std::vector<ExternalAddress>& addresses, const std::vector<PotentialRep>& potentials,
                  int total_depth) {
  if (addresses.empty() || addresses.size() != potentials.size())
    throw Error(ErrorKind::InvalidArgument, "need one potential per address");
  if (total_depth < 1) throw Error(ErrorKind::InvalidArgument, "total depth must be >= 1");
  for (const auto& a : addresses)
    if (a.depth() < static_cast<std::size_t>(total_depth))
      throw Error(ErrorKind::InsufficientDepth, "address " + a.to_string() + " shorter than the stored depth");
  for (const auto& t : potentials)
    if (t.is_zero()) throw Error(ErrorKind::InvalidArgument, "orbit potentials must be positive");
}

std::vector<std::vector<MarkedPoint>> skeleton(const std::vector<ExternalAddress>& addresses,
                                               const std::vector<PotentialRep>& potentials, int total_depth) {
  std::vector<std::vector<MarkedPoint>> orbits(addresses.size());
  for (std::size_t i = 0; i < addresses.size(); ++i) {
    for (int j = 0; j < total_depth; ++j) {
      MarkedPoint mp;
      mp.id = {static_cast<int>(i), j};
      mp.potential = grow(potentials[i], j);
      mp.symbol = addresses[i].entry(static_cast<std::size_t>(j));
      orbits[i].push_back(mp);
    }
  }
  return orbits;
}

}  // namespace

Complex MarkedPoint::pinned() const {
  return {potential.extended_value(), kTwoPi * static_cast<Real>(symbol) / potential.degree()};
}

int PostSingularSet::numeric_count(int orbit) const {
  int n = 0;
  for (const auto& p : this->orbit(orbit)) {
    if (p.symbolic()) break;
    ++n;
  }
  return n;
}

const MarkedPoint& PostSingularSet::at(PointId id) const {
  if (id.orbit < 0 || id.orbit >= orbit_count() || id.step < 0 || id.step >= stored_depth())
    throw Error(ErrorKind::OutOfRange, id_string(id) + " is not stored");
  return orbits_[static_cast<std::size_t>(id.orbit)][static_cast<std::size_t>(id.step)];
}

std::vector<MarkedPoint> PostSingularSet::points() const {
  std::vector<MarkedPoint> out;
  for (const auto& o : orbits_) out.insert(out.end(), o.begin(), o.end());
  return out;
}

PotentialRep PostSingularSet::potential(PointId id) const { return grow(base_potential(id.orbit), id.step); }

PostSingularSet PostSingularSet::with_coordinates(const std::vector<std::vector<Complex>>& coordinates) const {
  return make_psset(degree_, addresses_, base_, coordinates, stored_depth());
}

PostSingularSet build_psset(const ExpPolyMap& g, const std::vector<ExternalAddress>& addresses,
                            const std::vector<PotentialRep>& potentials, int numeric_depth, int total_depth) {
  check_inputs(addresses, potentials, total_depth);
  const int d = g.degree();
  for (std::size_t i = 0; i < addresses.size(); ++i) {
    for (std::size_t k = i + 1; k < addresses.size(); ++k) {
      const std::size_t known = std::min(addresses[i].depth(), addresses[k].depth());
      const std::size_t window = std::max<std::size_t>(4, known > 8 ? known - 4 : 4);
      const auto ov = overlaps(addresses[i], addresses[k], 4, std::min<std::size_t>(window, 16));
      if (ov.found)
        throw Error(ErrorKind::Validation, "addresses " + std::to_string(i) + " and " + std::to_string(k) +
                                               " overlap (shifts " + std::to_string(ov.k) + "," +
                                               std::to_string(ov.l) + ")");
    }
  }
  PostSingularSet ps;
  ps.degree_ = d;
  ps.addresses_ = addresses;
  ps.base_ = potentials;
  ps.orbits_ = skeleton(addresses, potentials, total_depth);
  for (auto& orbit : ps.orbits_) {
    const auto& a = addresses[static_cast<std::size_t>(orbit[0].id.orbit)];
    for (int j = 0; j < std::min(numeric_depth, total_depth); ++j) {
      auto& mp = orbit[static_cast<std::size_t>(j)];
      if (!mp.potential.raw_representable()) break;
      const auto shifted = shift(a, static_cast<std::size_t>(j));
      const std::size_t depth = std::min<std::size_t>(kTraceDepth, shifted.depth() - 1);
      mp.coordinate = trace_ray(g, shifted, mp.potential, depth).coordinate;
    }
    for (std::size_t j = 0; j + 1 < orbit.size() && !orbit[j + 1].symbolic(); ++j)
      ps.forward_residual_ = std::max(ps.forward_residual_, std::abs(g(*orbit[j].coordinate) - *orbit[j + 1].coordinate));
  }
  return ps;
}

PostSingularSet make_psset(int degree, const std::vector<ExternalAddress>& addresses,
                           const std::vector<PotentialRep>& potentials,
                           const std::vector<std::vector<Complex>>& coordinates, int total_depth) {
  check_inputs(addresses, potentials, total_depth);
  if (coordinates.size() != addresses.size())
    throw Error(ErrorKind::InvalidArgument, "need one coordinate list per orbit");
  PostSingularSet ps;
  ps.degree_ = degree;
  ps.addresses_ = addresses;
  ps.base_ = potentials;
  ps.orbits_ = skeleton(addresses, potentials, total_depth);
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (coordinates[i].size() > static_cast<std::size_t>(total_depth))
      throw Error(ErrorKind::InvalidArgument, "more coordinates than stored points");
    for (std::size_t j = 0; j < coordinates[i].size(); ++j) ps.orbits_[i][j].coordinate = coordinates[i][j];
  }
  return ps;
}

bool same_cluster(const PostSingularSet& ps, PointId a, PointId b) {
  return ps.potential(a).same_as(ps.potential(b)) && ps.symbol(a) == ps.symbol(b);
}

std::vector<Cluster> find_clusters(const PostSingularSet& ps) {
  std::vector<Cluster> out;
  for (const auto& p : ps.points()) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Cluster& c) {
      return c.symbol == p.symbol && c.potential.same_as(p.potential);
    });
    if (it == out.end()) {
      out.push_back({p.potential, p.symbol, {p.id}});
    } else {
      it->members.push_back(p.id);
    }
  }
  return out;
}

int horizon_H(const PostSingularSet& ps, PointId a, PointId b) {
  if (a == b) throw Error(ErrorKind::InvalidArgument, "H needs two distinct points");
  if (!same_cluster(ps, a, b))
    throw Error(ErrorKind::PreconditionViolated, id_string(a) + " and " + id_string(b) + " are not clustered");
  const auto& sa = ps.address(a.orbit);
  const auto& sb = ps.address(b.orbit);
  for (int n = 1; n < kMaxHorizon; ++n) {
    const std::size_t ja = static_cast<std::size_t>(a.step + n);
    const std::size_t jb = static_cast<std::size_t>(b.step + n);
    if (ja >= sa.depth() || jb >= sb.depth()) break;
    if (sa.entry(ja) != sb.entry(jb)) return n;
  }
  throw Error(ErrorKind::AddressDepth,
              id_string(a) + " and " + id_string(b) + " share their address as far as it is known");
}

std::optional<int> history_L(const PostSingularSet& ps, PointId a, PointId b) {
  if (!same_cluster(ps, a, b))
    throw Error(ErrorKind::PreconditionViolated, id_string(a) + " and " + id_string(b) + " are not clustered");
  for (int n = 1; n <= std::min(a.step, b.step); ++n)
    if (ps.symbol({a.orbit, a.step - n}) != ps.symbol({b.orbit, b.step - n})) return n;
  return std::nullopt;
}

Real log_iterate_derivative(const PotentialRep& t, int H) {
  Real sum = 0;
  for (int r = 0; r < H; ++r) sum += log_growth_derivative(grow(t, r).extended_value(), t.degree());
  return sum;
}

Beta beta(const PostSingularSet& ps, PointId a, PointId b) {
  if (a == b) throw Error(ErrorKind::InvalidArgument, "beta needs two distinct points");
  const int d = ps.degree();
  Beta out;
  if (!same_cluster(ps, a, b)) {
    out.value = kPi / (2 * d);
    out.log_abs = std::log(out.value);
    return out;
  }
  out.same_cluster = true;
  out.H = horizon_H(ps, a, b);
  out.delta_s = ps.symbol({b.orbit, b.step + out.H}) - ps.symbol({a.orbit, a.step + out.H});
  out.log_abs = std::log(kPi * std::fabs(static_cast<Real>(out.delta_s)) / d) -
                log_iterate_derivative(ps.potential(a), out.H);
  const Real magnitude = std::exp(out.log_abs);
  out.underflow = magnitude == 0 || !std::isfinite(out.log_abs);
  out.value = out.delta_s < 0 ? -magnitude : magnitude;
  return out;
}

Real AnnularSector::bound(int degree) const {
  Real sum = 0;
  Real v = x;
  for (int k = 0; k <= n; ++k) {
    sum += std::exp(-v / 3);
    v = growth(v, degree);
  }
  return sum;
}

bool AnnularSector::contains(Complex alpha, int degree, bool closed) const {
  if (alpha == Complex(0)) throw Error(ErrorKind::InvalidArgument, "sector membership of 0");
  const Real b = bound(degree);
  const Real lm = std::fabs(std::log(std::abs(alpha)));
  const Real am = std::fabs(std::arg(alpha));
  return closed ? (lm <= b && am <= b) : (lm < b && am < b);
}

bool sector_contains(const AnnularSector& sec, Complex alpha, int degree) { return sec.contains(alpha, degree); }

ProductLawReport sector_product_law(Rng& rng, Real x, int k, std::size_t samples, int degree) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "product law needs k >= 1");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const AnnularSector target{x, k - 1};
  const Real b = target.bound(degree);
  ProductLawReport rep;
  rep.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    Complex prod = 1;
    Real xi = x;
    for (int i = 0; i < k; ++i) {
      const Real bi = AnnularSector{xi, 0}.bound(degree);
      prod *= std::polar(std::exp(bi * static_cast<Real>(u(rng))), bi * static_cast<Real>(u(rng)));
      xi = growth(xi, degree);
    }
    const Real ratio = std::max(std::fabs(std::log(std::abs(prod))), std::fabs(std::arg(prod))) / b;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (!target.contains(prod, degree)) ++rep.violations;
  }
  return rep;
}

RotationScan rotation_ratio_scan(Rng& rng, const ExpPolyMap& g, const std::vector<Real>& ts, std::size_t pairs) {
  const int d = g.degree();
  std::uniform_int_distribution<int> strip(-3, 3);
  RotationScan scan;
  for (const Real t : ts) {
    RotationRatio row;
    row.t = t;
    row.samples = pairs;
    const AnnularSector sec{t, 0};
    const Real b = sec.bound(d);
    const Real r = std::exp(-t / 2);
    const Complex scale = std::exp(static_cast<Real>(d) * t) * static_cast<Real>(d);
    for (std::size_t n = 0; n < pairs; ++n) {
      const Complex base(t, kTwoPi * strip(rng) / d);
      const Complex z1 = base + random_in_disk(rng, r);
      Complex z2 = base + random_in_disk(rng, r);
      while (z2 == z1) z2 = base + random_in_disk(rng, r);
      const Complex alpha = (g(z1) - g(z2)) / (scale * (z1 - z2));
      row.worst_ratio =
          std::max(row.worst_ratio, std::max(std::fabs(std::log(std::abs(alpha))), std::fabs(std::arg(alpha))) / b);
      if (sec.contains(alpha, d)) ++row.inside;
    }
    scan.rows.push_back(row);
  }
  for (std::size_t i = scan.rows.size(); i-- > 0;) {
    if (scan.rows[i].inside != scan.rows[i].samples) break;
    scan.threshold = scan.rows[i].t;
  }
  return scan;
}

ClusterDisk cluster_disk(const PostSingularSet& ps, PointId a, PointId b) {
  if (!ps.potential(a).same_as(ps.potential(b)))
    throw Error(ErrorKind::PreconditionViolated, "cluster disk needs equal potentials");
  const Symbol ds = ps.symbol(b) - ps.symbol(a);
  if (ds == 0) throw Error(ErrorKind::InvalidArgument, "cluster disk of points with equal first symbol");
  const int d = ps.degree();
  const auto& pa = ps.at(a);
  const auto& pb = ps.at(b);
  ClusterDisk disk;
  if (pa.symbolic() && pb.symbolic()) {
    disk.center = 1;
  } else {
    disk.center = static_cast<Real>(d) * (pb.position() - pa.position()) /
                  (Complex(0, kTwoPi) * static_cast<Real>(ds));
  }
  disk.radius = a.step == 0 || b.step == 0
                    ? kInf
                    : d * (Real(1) / b.step + Real(1) / a.step) / (kTwoPi * std::fabs(static_cast<Real>(ds)));
  return disk;
}

ClusterEstimate verify_cluster_estimate(const PostSingularSet& ps, PointId a, PointId b) {
  const int d = ps.degree();
  ClusterEstimate out;
  out.H = horizon_H(ps, a, b);
  const PointId ah{a.orbit, a.step + out.H};
  const PointId bh{b.orbit, b.step + out.H};
  if (ps.at(a).symbolic() || ps.at(b).symbolic())
    throw Error(ErrorKind::PreconditionViolated, "cluster estimate needs numeric points");
  const Complex step_h = ps.at(bh).position() - ps.at(ah).position();
  if (!std::isfinite(step_h.real()) || !std::isfinite(step_h.imag()))
    throw Error(ErrorKind::OutOfRange, "points at step H are beyond the numeric range");
  const Symbol ds = ps.symbol(bh) - ps.symbol(ah);
  const Complex norm = Complex(0, kTwoPi) * static_cast<Real>(ds) / static_cast<Real>(d);
  const PotentialRep t = ps.potential(a);
  out.t = t.extended_value();
  out.delta = step_h / norm;
  if (out.delta == Complex(0)) throw Error(ErrorKind::NonConvergence, "numerically degenerate delta");
  out.disk = cluster_disk(ps, ah, bh);
  out.delta_in_disk = out.disk.radius > 0;
  const Real log_deriv = log_iterate_derivative(t, out.H);
  out.difference = ps.at(b).position() - ps.at(a).position();
  out.nu = out.difference * std::exp(log_deriv) / step_h;
  const AnnularSector sector{out.t, out.H - 1};
  out.sector_bound = sector.bound(d);
  out.nu_in_sector = out.nu != Complex(0) && sector.contains(out.nu, d);
  out.rebuilt = norm * std::exp(-log_deriv) * out.nu * out.delta;
  return out;
}

BetaReport check_beta_inequalities(const PostSingularSet& ps) {
  struct Row {
    int step;
    Real ratio;
    bool same;
  };
  std::vector<Row> rows;
  const auto pts = ps.points();
  for (std::size_t x = 0; x < pts.size(); ++x) {
    if (pts[x].symbolic()) continue;
    for (std::size_t y = x + 1; y < pts.size(); ++y) {
      if (pts[y].symbolic()) continue;
      const auto bt = beta(ps, pts[x].id, pts[y].id);
      const Real dist = std::abs(*pts[x].coordinate - *pts[y].coordinate);
      const Real ratio = bt.underflow ? kInf : dist / std::fabs(bt.value);
      rows.push_back({std::min(pts[x].id.step, pts[y].id.step), ratio, bt.same_cluster});
    }
  }
  BetaReport rep;
  int max_step = 0;
  for (const auto& r : rows) max_step = std::max(max_step, r.step);
  auto passes = [](const Row& r) { return r.ratio > 1 && (!r.same || r.ratio < 4); };
  for (int j0 = 0; j0 <= max_step; ++j0) {
    bool ok = true;
    for (const auto& r : rows)
      if (r.step >= j0 && !passes(r)) ok = false;
    if (ok) {
      rep.j0 = j0;
      break;
    }
  }
  rep.min_lower_ratio = kInf;
  for (const auto& r : rows) {
    if (!rep.j0 || r.step < *rep.j0) {
      ++rep.excluded;
      continue;
    }
    ++rep.pairs;
    rep.min_lower_ratio = std::min(rep.min_lower_ratio, r.ratio);
    if (r.same) {
      rep.any_same_cluster = true;
      rep.max_upper_ratio = std::max(rep.max_upper_ratio, r.ratio);
    }
  }
  return rep;
}

std::vector<int> points_inside(const PostSingularSet& ps, Real rho) {
  std::vector<int> out;
  for (int i = 0; i < ps.orbit_count(); ++i) {
    int n = -1;
    for (const auto& p : ps.orbit(i))
      if (std::abs(p.position()) < rho) n = p.id.step;
    out.push_back(n);
  }
  return out;
}

PartitionRadius good_partition_radius(const PostSingularSet& ps) {
  auto pts = ps.points();
  std::sort(pts.begin(), pts.end(), [](const MarkedPoint& x, const MarkedPoint& y) { return x.potential < y.potential; });
  // Distinct potentials in increasing order.
  std::vector<PotentialRep> P;
  for (const auto& p : pts)
    if (P.empty() || !P.back().same_as(p.potential)) P.push_back(p.potential);
  std::vector<Real> values;
  for (const auto& t : P) values.push_back(t.extended_value());

  auto modulus = [](const MarkedPoint& p) { return std::abs(p.position()); };

  PartitionRadius out;
  std::vector<Real> candidates{0};
  for (Real v : values)
    if (std::isfinite(v)) candidates.push_back(v);
  for (Real tp : candidates) {
    Real gap = kInf;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (!(values[i] > tp)) continue;
      if (std::isinf(values[i + 1])) continue;
      gap = std::min(gap, values[i + 1] - values[i] - 2);
    }
    if (!(gap > 0)) continue;

    Real mod = kInf;
    for (std::size_t x = 0; x < pts.size(); ++x) {
      if (!(pts[x].potential.extended_value() > tp)) continue;
      for (std::size_t y = x + 1; y < pts.size(); ++y) {
        if (!(pts[x].potential < pts[y].potential) || pts[x].potential.same_as(pts[y].potential)) continue;
        const Real b = modulus(pts[y]);
        if (std::isinf(b)) continue;
        mod = std::min(mod, b - modulus(pts[x]) - 2);
      }
    }
    if (!(mod > 0)) continue;

    std::vector<Real> rhos, margins;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < values.size() && ok; ++i) {
      const Real rho = (values[i] + values[i + 1]) / 2;
      if (!(rho > tp) || !std::isfinite(rho)) continue;
      Real margin = kInf;
      for (const auto& p : pts) {
        const Real r = modulus(p);
        margin = std::min(margin, p.potential.extended_value() < rho ? (rho - 1) - r : r - (rho + 1));
      }
      if (!(margin > 0)) ok = false;
      rhos.push_back(rho);
      margins.push_back(margin);
    }
    if (!ok || rhos.empty()) continue;
    out.conclusive = true;
    out.t_prime = tp;
    out.rho = rhos;
    out.split_margin = margins;
    out.gap_margin = gap;
    out.modulus_margin = mod;
    for (Real rho : rhos) out.N.push_back(points_inside(ps, rho));
    return out;
  }
  return out;
}

}  // namespace escort
