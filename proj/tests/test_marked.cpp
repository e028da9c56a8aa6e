#include <cmath>

#include "doctest.h"
#include "escort/error.hpp"
#include "escort/marked.hpp"
#include "escort/rays.hpp"

using namespace escort;

namespace {

const std::vector<Symbol> kTM{0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0};

ExternalAddress with(std::vector<Symbol> s, std::size_t at, Symbol v) {
  s[at] = v;
  return ExternalAddress::prefix(s);
}

PostSingularSet symbolic_pair(int d, const ExternalAddress& a, const ExternalAddress& b, Real t, int depth = 10) {
  const auto T = PotentialRep::from_raw(t, d);
  return make_psset(d, {a, b}, {T, T}, {{}, {}}, depth);
}

const ExpPolyMap kSquareMinus2z{MonicPolynomial({Complex(0), Complex(-2)})};

PostSingularSet cluster_instance() {
  const auto a1 = ExternalAddress::prefix({0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0});
  const auto a2 = ExternalAddress::prefix({0, 0, 0, -1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1});
  const auto t = PotentialRep::from_raw(0.4L, 2);
  return build_psset(kSquareMinus2z, {a1, a2}, {t, t}, 8, 10);
}

}  // namespace

TEST_CASE("build_psset") {
  const ExpPolyMap exp1{MonicPolynomial({Complex(0)})};
  const auto one = build_psset(exp1, {ExternalAddress::prefix(kTM)}, {PotentialRep::from_raw(2, 1)}, 8, 12);
  for (const auto& c : find_clusters(one)) CHECK(c.members.size() == 1);

  const auto a1 = ExternalAddress::prefix({1, 0, -1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1});
  const auto a2 = ExternalAddress::prefix({1, 0, -1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0});
  const auto t = PotentialRep::from_raw(1, 2);
  const auto ps = build_psset(kSquareMinus2z, {a1, a2}, {t, t}, 8, 10);
  for (const auto& c : find_clusters(ps)) {
    const auto step = static_cast<std::size_t>(c.members.front().step);
    CHECK(c.members.size() == (a1.entry(step) == a2.entry(step) ? 2u : 1u));
    if (step <= 4) CHECK(c.members.size() == 2);
  }
  CHECK(ps.forward_residual() < 1e-6L);

  // Forward consistency against the map itself.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j + 1 < ps.numeric_count(i); ++j)
      CHECK(std::abs(kSquareMinus2z(*ps.at({i, j}).coordinate) - *ps.at({i, j + 1}).coordinate) < 1e-6L);

  CHECK_THROWS_AS(build_psset(exp1, {ExternalAddress::prefix(kTM), shift(ExternalAddress::prefix(kTM), 1)},
                              {PotentialRep::from_raw(2, 1), PotentialRep::from_raw(3, 1)}, 4, 6),
                  Error);
}

TEST_CASE("find_clusters") {
  const auto a = ExternalAddress::prefix(kTM);
  const auto b = with(kTM, 1, 5);
  const auto distinct = make_psset(1, {a, b}, {PotentialRep::from_raw(1, 1), PotentialRep::from_raw(1.5L, 1)},
                                   {{}, {}}, 8);
  for (const auto& c : find_clusters(distinct)) CHECK(c.members.size() == 1);

  const auto ps = symbolic_pair(1, a, b, 1);
  std::size_t total = 0, excess = 0;
  const auto clusters = find_clusters(ps);
  for (const auto& c : clusters) {
    excess += c.members.size() - 1;
    if (c.members.front().step == 0) CHECK(c.members.size() == 2);
    if (c.members.front().step == 1) CHECK(c.members.size() == 1);
  }
  for (int i = 0; i < ps.orbit_count(); ++i) total += ps.orbit(i).size();
  CHECK(clusters.size() + excess == total);
}

TEST_CASE("horizon_H and history_L") {
  const auto a = ExternalAddress::prefix(kTM);
  const auto ps1 = symbolic_pair(1, a, with(kTM, 1, 7), 1);
  CHECK(horizon_H(ps1, {0, 0}, {1, 0}) == 1);
  const auto ps3 = symbolic_pair(1, a, with(kTM, 5, 4), 1);
  CHECK(horizon_H(ps3, {0, 2}, {1, 2}) == 3);
  const auto apart = make_psset(1, {a, with(kTM, 1, 7)},
                                {PotentialRep::from_raw(1, 1), PotentialRep::from_raw(2, 1)}, {{}, {}}, 8);
  CHECK_THROWS_AS(horizon_H(apart, {0, 0}, {1, 0}), Error);

  CHECK_FALSE(history_L(ps3, {0, 0}, {1, 0}).has_value());
  const auto diff0 = symbolic_pair(1, a, with(kTM, 0, 1), 1);
  CHECK(history_L(diff0, {0, 1}, {1, 1}) == 1);
  const auto late = symbolic_pair(1, a, with(kTM, 8, 4), 1, 12);
  CHECK_FALSE(history_L(late, {0, 5}, {1, 5}).has_value());

  // Every same-cluster pair has a finite horizon.
  const auto ps = cluster_instance();
  for (const auto& c : find_clusters(ps))
    for (std::size_t i = 0; i + 1 < c.members.size(); ++i) CHECK(horizon_H(ps, c.members[i], c.members[i + 1]) >= 1);
}

TEST_CASE("beta") {
  const auto a = ExternalAddress::prefix(kTM);
  const auto apart = symbolic_pair(2, a, with(kTM, 0, 1), 1);
  CHECK(static_cast<double>(beta(apart, {0, 0}, {1, 0}).value) == doctest::Approx(M_PI / 4));

  // H = 2, delta s = 3 at t = 1 for d = 1: 3 pi / (F'(1) F'(F(1))).
  const auto ps = symbolic_pair(1, a, with(kTM, 2, 4), 1);
  const auto b = beta(ps, {0, 0}, {1, 0});
  CHECK(b.H == 2);
  CHECK(b.delta_s == 3);
  const Real oracle = 3 * kPi / (std::exp(Real(1)) * std::exp(std::expm1(Real(1))));
  CHECK(std::fabs(b.value - oracle) < 1e-15L);
  CHECK(static_cast<double>(b.value) == doctest::Approx(0.6219).epsilon(1e-4));
  CHECK(std::fabs(std::fabs(beta(ps, {1, 0}, {0, 0}).value) - std::fabs(b.value)) < 1e-18L);

  for (Real t : {0.5L, 1.0L, 2.0L}) {
    const auto h1 = beta(symbolic_pair(1, a, with(kTM, 1, 2), t), {0, 0}, {1, 0});
    CHECK(h1.H == 1);
    CHECK(std::fabs(h1.value - kPi * std::exp(-t)) < 1e-15L);
  }
  Real prev = std::numeric_limits<Real>::infinity();
  for (Real t : {0.3L, 0.6L, 1.0L, 1.4L}) {
    const Real v = std::fabs(beta(symbolic_pair(1, a, with(kTM, 2, 4), t), {0, 0}, {1, 0}).value);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("annular sectors") {
  CHECK(AnnularSector{2, 0}.contains(1, 1));
  CHECK(AnnularSector{7, 3}.contains(1, 2));
  const AnnularSector sec{3 * std::log(Real(10)), 0};
  CHECK(static_cast<double>(sec.bound(1)) == doctest::Approx(0.1));
  CHECK(sector_contains(sec, 1.05L, 1));
  CHECK_FALSE(sector_contains(sec, 1.2L, 1));
}

TEST_CASE("sector product law") {
  Rng rng(12);
  CHECK(sector_product_law(rng, 2, 1, 1000, 2).violations == 0);
  for (int k : {2, 3, 4})
    for (Real x : {2.0L, 5.0L}) CHECK(sector_product_law(rng, x, k, 1000, 2).violations == 0);

  // Extremal witnesses sit exactly on the bound.
  for (int d : {1, 2}) {
    Complex prod = 1;
    Real xi = 2;
    for (int i = 0; i < 3; ++i) {
      const Real bi = AnnularSector{xi, 0}.bound(d);
      prod *= std::polar(std::exp(bi), bi / 2);
      xi = growth(xi, d);
    }
    const Real b = AnnularSector{2, 2}.bound(d);
    CHECK(std::fabs(std::log(std::abs(prod))) <= b * (1 + 1e-15L));
    CHECK(std::fabs(std::arg(prod)) <= b);
  }
}

TEST_CASE("cluster disks") {
  const auto a = ExternalAddress::prefix(kTM);
  const auto ps = symbolic_pair(1, a, with(kTM, 10, kTM[10] + 1), 1, 12);
  const auto disk = cluster_disk(ps, {0, 10}, {1, 10});
  CHECK(static_cast<double>(disk.radius) == doctest::Approx(0.2 / (2 * M_PI)));
  CHECK(disk.center == Complex(1));

  Real prev = std::numeric_limits<Real>::infinity();
  for (int j = 1; j <= 10; ++j) {
    const auto pj = symbolic_pair(1, a, with(kTM, static_cast<std::size_t>(j), kTM[static_cast<std::size_t>(j)] + 1), 1, 12);
    const Real r = cluster_disk(pj, {0, j}, {1, j}).radius;
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("cluster estimates") {
  // H = 1 pair at t = 8 on z^2 - 2z; the step-1 points are pinned.
  const auto a1 = ExternalAddress::prefix({0, 1, 0, 1, 1, 0, 1, 0, 0, 1});
  const auto a2 = ExternalAddress::prefix({0, -1, 2, -2, 3, -1, 2, 0, -3, 1});
  const auto t = PotentialRep::from_raw(8, 2);
  const auto ps = build_psset(kSquareMinus2z, {a1, a2}, {t, t}, 8, 6);
  const auto e = verify_cluster_estimate(ps, {0, 0}, {1, 0});
  CHECK(e.H == 1);
  CHECK(e.nu_in_sector);
  CHECK(e.delta_in_disk);
  CHECK(std::abs(e.difference - e.rebuilt) < 1e-10L * std::abs(e.difference));

  const auto ci = cluster_instance();
  for (const auto& c : find_clusters(ci)) {
    if (c.members.size() != 2) continue;
    const auto p = c.members[0], q = c.members[1];
    if (ci.at(p).symbolic() || ci.at(q).symbolic()) continue;
    const auto est = verify_cluster_estimate(ci, p, q);
    CHECK(est.delta_in_disk);
    CHECK(std::abs(est.difference - est.rebuilt) < 1e-10L * std::abs(est.difference));
  }
}

TEST_CASE("beta inequalities") {
  const auto a = ExternalAddress::prefix(kTM);
  const auto singles = make_psset(1, {a, with(kTM, 0, 3)},
                                  {PotentialRep::from_raw(1, 1), PotentialRep::from_raw(1.7L, 1)}, {{}, {}}, 8);
  CHECK_FALSE(check_beta_inequalities(singles).any_same_cluster);

  const auto rep = check_beta_inequalities(cluster_instance());
  REQUIRE(rep.j0.has_value());
  CHECK(rep.any_same_cluster);
  CHECK(rep.min_lower_ratio > 1);
  CHECK(rep.max_upper_ratio < 4);
  MESSAGE("beta scan threshold j0 = " << *rep.j0 << ", excluded " << rep.excluded);
}

TEST_CASE("partition radius") {
  const ExpPolyMap exp1{MonicPolynomial({Complex(0)})};
  const auto ps = build_psset(exp1, {ExternalAddress::prefix(kTM)}, {PotentialRep::from_raw(2, 1)}, 8, 12);
  const auto pr = good_partition_radius(ps);
  CHECK(pr.conclusive);
  REQUIRE_FALSE(pr.rho.empty());
  for (std::size_t r = 0; r < pr.rho.size(); ++r) {
    CHECK(pr.rho[r] > pr.t_prime);
    // N_i(rho) recounted from the stored positions.
    int n = -1;
    for (const auto& p : ps.orbit(0))
      if (std::abs(p.position()) < pr.rho[r]) n = std::max(n, p.id.step);
    CHECK(pr.N[r][0] == n);
    CHECK(points_inside(ps, pr.rho[r])[0] == n);
  }

  const auto ci = cluster_instance();
  const auto two = good_partition_radius(ci);
  CHECK(two.conclusive);
  CHECK(two.gap_margin > 0);
}

TEST_CASE("rotation ratio") {
  Rng rng(40);
  const auto scan = rotation_ratio_scan(rng, kSquareMinus2z, {4, 6, 8, 12, 16, 20}, 200);
  REQUIRE(scan.threshold.has_value());
  MESSAGE("rotation threshold t = " << static_cast<double>(*scan.threshold));
  for (const auto& row : scan.rows)
    if (row.t >= *scan.threshold) CHECK(row.inside == row.samples);
  CHECK(*scan.threshold <= 8);
}
