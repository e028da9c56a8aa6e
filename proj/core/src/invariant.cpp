#include "escort/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "escort/error.hpp"

namespace escort {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

std::string id_string(PointId p) { return "a(" + std::to_string(p.orbit) + "," + std::to_string(p.step) + ")"; }

void record(ConditionResult& c, Real margin, const std::string& where) {
  ++c.checked;
  if (c.checked == 1 || margin < c.margin) {
    c.margin = margin;
    c.worst = where;
  }
  if (!(margin > 0)) c.pass = false;
}

}  // namespace

Real default_m_rho_constant(int degree, Real L) { return degree * std::pow(1 + L, static_cast<Real>(degree)); }

MRhoEstimate m_rho_estimate(Rng& rng, Real rho, int degree, const PotentialGrid& grid, Real K, std::size_t maps,
                            std::size_t points) {
  const auto n = grid.midpoint_index(rho);
  if (!n) throw Error(ErrorKind::InvalidArgument, "rho is not a midpoint of the potential grid");
  if (!(K > 0)) throw Error(ErrorKind::InvalidArgument, "K must be positive");
  MRhoEstimate out;
  out.t_n = grid.potentials()[*n];
  const Real d = degree;
  out.log_upper = std::log(K) + d * d * d * out.t_n;
  out.log_empirical = -kInf;
  std::uniform_real_distribution<double> angle(0.0, 1.0);
  const Real re = (d + 1) * out.t_n;
  for (std::size_t m = 0; m < maps; ++m) {
    const auto p = random_map_with_sv_radius(rng, degree, rho);
    for (std::size_t k = 0; k < points; ++k) {
      const Complex e = std::exp(Complex(re, kTwoPi * static_cast<Real>(angle(rng))));
      out.log_empirical = std::max(out.log_empirical, std::log(std::abs(p.derivative(e))) + re);
    }
  }
  out.above_rho = std::log(rho) < out.log_empirical;
  out.below_upper = out.log_empirical <= out.log_upper;
  return out;
}

InvariantReport invariant_check(const Configuration& cfg, const PostSingularSet& ps, Real rho,
                                const InvariantConstants& k, const std::vector<Leg>& legs) {
  InvariantReport rep;
  rep.rho = rho;
  rep.N = points_inside(ps, rho);
  const int d = ps.degree();
  const Real logM = k.log_M;
  auto pos = [&](PointId id) { return cfg.position(ps, id); };
  auto Ni = [&](int i) { return rep.N[static_cast<std::size_t>(i)]; };

  // (1) and (2).
  for (int i = 0; i < ps.orbit_count(); ++i) {
    for (int j = 0; j <= Ni(i); ++j) record(rep.c1, rho - std::abs(pos({i, j})), id_string({i, j}));
    for (int j = Ni(i) + 1; j < static_cast<int>(cfg.positions[static_cast<std::size_t>(i)].size()); ++j) {
      const Real allowed = j == 0 ? kInf : Real(1) / j;
      record(rep.c2, allowed - std::abs(pos({i, j}) - *ps.at({i, j}).coordinate), id_string({i, j}));
    }
  }

  // (3) separation inside D_rho.
  std::vector<PointId> inside;
  for (int i = 0; i < ps.orbit_count(); ++i)
    for (int j = 0; j <= Ni(i); ++j) inside.push_back({i, j});
  for (std::size_t x = 0; x < inside.size(); ++x) {
    for (std::size_t y = x + 1; y < inside.size(); ++y) {
      const PointId a = inside[x], b = inside[y];
      const int n = std::min(Ni(a.orbit) + 1 - a.step, Ni(b.orbit) + 1 - b.step);
      const auto bt = beta(ps, {a.orbit, a.step + n}, {b.orbit, b.step + n});
      const Real lhs = std::log(std::abs(pos(a) - pos(b)));
      record(rep.c3, lhs - (bt.log_abs - n * logM), id_string(a) + "," + id_string(b));
    }
  }

  // (4) word lengths of the transported legs.
  if (!legs.empty()) {
    std::vector<LabeledPoint> current;
    for (const auto& p : ps.points()) {
      const Complex z = pos(p.id);
      if (std::isfinite(z.real())) current.push_back({point_label(ps, p.id), z, point_address(ps, p.id)});
    }
    std::vector<std::pair<PointId, FreeWord>> words;
    for (const auto& leg : legs) {
      if (leg.foot.step > Ni(leg.foot.orbit)) continue;
      Leg moved = leg;
      const Complex shift = pos(leg.foot) - leg.vertices.front();
      const std::size_t n = moved.vertices.size();
      for (std::size_t v = 0; v < n; ++v)
        moved.vertices[v] += n == 1 ? shift : shift * (1 - static_cast<Real>(v) / static_cast<Real>(n - 1));
      const int label = point_label(ps, leg.foot);
      std::vector<LabeledPoint> others;
      for (const auto& lp : current)
        if (lp.label != label) others.push_back(lp);
      try {
        words.emplace_back(leg.foot, leg_word(others, moved));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateCrossing) throw;
        record(rep.c4, 0, id_string(leg.foot) + " leg degenerate");
      }
    }
    for (const auto& wb : word_length_bound_check(words, rep.N, k.A, k.C))
      record(rep.c4, wb.log_bound - (wb.length ? std::log(static_cast<Real>(wb.length)) : -kInf),
             id_string(wb.foot));
  }

  // (5) rigidity in clusters outside D_rho.
  const auto moved = ps.with_coordinates(cfg.positions);
  const auto pts = ps.points();
  for (std::size_t x = 0; x < pts.size(); ++x) {
    const PointId a = pts[x].id;
    if (a.step <= Ni(a.orbit) || moved.at(a).symbolic()) continue;
    for (std::size_t y = x + 1; y < pts.size(); ++y) {
      const PointId b = pts[y].id;
      if (b.step <= Ni(b.orbit) || moved.at(b).symbolic() || !same_cluster(ps, a, b)) continue;
      const auto est = verify_cluster_estimate(moved, a, b);
      const Real spread = std::max(std::fabs(std::log(std::abs(est.nu))), std::fabs(std::arg(est.nu)));
      const Real margin = est.delta_in_disk ? std::log(est.sector_bound) - std::log(spread) : -kInf;
      record(rep.c5, spread == 0 ? kInf : margin, id_string(a) + "," + id_string(b));
    }
  }

  // (6) clusters inside D_rho, against the asymptotic orbit 0.
  int Nmax = -1;
  for (int n : rep.N) Nmax = std::max(Nmax, n);
  for (int kk = 1; kk < ps.orbit_count(); ++kk) {
    const PointId top_k{kk, Ni(kk) + 1};
    const PointId top_1{0, Ni(0) + 1};
    if (!same_cluster(ps, top_k, top_1)) continue;
    const auto L = history_L(ps, top_k, top_1);
    const Real log4b = std::log(Real(4)) + beta(ps, top_k, top_1).log_abs;
    for (int n = 0; n <= std::min(top_k.step, top_1.step); ++n) {
      const PointId a{kk, top_k.step - n}, b{0, top_1.step - n};
      const Real lhs = std::log(std::abs(pos(a) - pos(b)));
      const std::string where = id_string(a) + "," + id_string(b);
      if (!L || n < *L) {
        record(rep.c6, log4b + 2 * d * Nmax * n * logM - lhs, where + " (a)");
      } else {
        const Real d4 = static_cast<Real>(d) * d * d * d;
        record(rep.c6, lhs + (2 * d4 * Nmax + n - *L) * logM, where + " (b)");
      }
    }
  }
  return rep;
}

SeparationCheck separation_step_check(const Configuration& /*before*/, const StepResult& step,
                                      const PostSingularSet& ps, const std::vector<int>& N, Real log_M) {
  Real radius = 0;
  for (int i = 0; i < ps.orbit_count(); ++i)
    radius = std::max(radius, std::abs(ps.at({i, N.at(static_cast<std::size_t>(i)) + 1}).position()));
  radius += 1;
  std::vector<std::pair<Complex, Complex>> rows;  // (target, new position)
  for (std::size_t i = 0; i < step.targets.size(); ++i)
    for (std::size_t j = 0; j < step.targets[i].size(); ++j)
      if (std::abs(step.targets[i][j]) <= radius) rows.emplace_back(step.targets[i][j], step.next.positions[i][j]);
  SeparationCheck out;
  out.min_log_margin = kInf;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    for (std::size_t y = x + 1; y < rows.size(); ++y) {
      ++out.pairs;
      const Real image = std::abs(rows[x].first - rows[y].first);
      if (image == 0) continue;
      const Real margin = std::log(std::abs(rows[x].second - rows[y].second)) - (std::log(image) - log_M);
      out.min_log_margin = std::min(out.min_log_margin, margin);
      if (!(margin >= 0)) ++out.violations;
    }
  }
  return out;
}

}  // namespace escort
