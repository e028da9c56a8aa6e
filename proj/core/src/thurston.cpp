#include "escort/thurston.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "escort/error.hpp"
#include "escort/rays.hpp"
#include "escort/solver.hpp"

namespace escort {

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

std::string id_string(PointId p) { return "a(" + std::to_string(p.orbit) + "," + std::to_string(p.step) + ")"; }

Complex pull_back(const ExpPolyMap& g, Complex target, Complex previous, PointId id, int& continued) {
  const Complex asym = g.poly()(Complex(0));
  if (std::abs(target - asym) <= 1e-10L)
    throw Error(ErrorKind::DegeneratePullback,
                "target of " + id_string(id) + " sits on the asymptotic value (separation condition 6 violated)");
  const auto sv = singular_values(g).all();
  const Complex image = g(previous);
  Real clearance = kInf;
  for (const auto& v : sv) clearance = std::min(clearance, std::abs(image - v));
  if (std::abs(target - image) > clearance / 2) {
    const Complex path[] = {image, target};
    try {
      const Complex z = continue_branch(g, path, previous, std::min<Real>(1e-6L, clearance / 4));
      ++continued;
      return z;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ContinuationAbort) throw;
    }
  }
  const auto candidates = preimages(g, target, {previous.imag() - 2 * kPi, previous.imag() + 2 * kPi});
  if (candidates.empty()) throw Error(ErrorKind::NonConvergence, "no preimage found for " + id_string(id));
  std::vector<std::pair<Real, Complex>> ranked;
  for (const auto& z : candidates) ranked.emplace_back(std::abs(z - previous), z);
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  if (ranked.size() > 1 && ranked[1].first - ranked[0].first <= 1e-9L)
    throw Error(ErrorKind::BranchAmbiguity, "two preimages equally close to the previous " + id_string(id));
  return ranked[0].second;
}

}  // namespace

Complex Configuration::position(const PostSingularSet& ps, PointId id) const {
  const auto& row = positions.at(static_cast<std::size_t>(id.orbit));
  if (id.step >= 0 && static_cast<std::size_t>(id.step) < row.size()) return row[static_cast<std::size_t>(id.step)];
  return ps.at(id).pinned();
}

Configuration capture(const PostSingularSet& ps, const ExpPolyMap& f0) {
  if (f0.degree() != ps.degree()) throw Error(ErrorKind::InvalidArgument, "f0 degree differs from the marked set");
  if (ps.orbit_count() != ps.degree())
    throw Error(ErrorKind::InvalidArgument, "need one asymptotic and d - 1 critical orbits (m = d)");
  Configuration cfg;
  cfg.poly = f0.poly();
  for (int i = 0; i < ps.orbit_count(); ++i) {
    const int n = ps.numeric_count(i);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "orbit " + std::to_string(i) + " has no numeric points");
    std::vector<Complex> row;
    for (int j = 0; j < n; ++j) row.push_back(*ps.at({i, j}).coordinate);
    cfg.positions.push_back(std::move(row));
  }
  for (int i = 0; i < ps.orbit_count(); ++i)
    for (int k = 0; k < i; ++k) {
      const Complex a = cfg.positions[static_cast<std::size_t>(i)][0];
      const Complex b = cfg.positions[static_cast<std::size_t>(k)][0];
      if (std::abs(a - b) <= 16 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::abs(a)))
        throw Error(ErrorKind::Validation, "captured singular values of orbits " + std::to_string(k) + " and " +
                                               std::to_string(i) + " coincide");
    }
  return cfg;
}

MonicPolynomial solve_for(const Configuration& cfg, const PostSingularSet& ps, Real* residual) {
  std::vector<Complex> critical;
  for (int i = 1; i < ps.orbit_count(); ++i) critical.push_back(cfg.position(ps, {i, 0}));
  const auto sol = solve_poly_from_singular_data(cfg.position(ps, {0, 0}), critical, ps.degree(), cfg.poly);
  if (residual) *residual = sol.residual;
  return sol.poly;
}

StepResult sigma_step(const Configuration& cfg, const PostSingularSet& ps) {
  StepResult out;
  const ExpPolyMap g(solve_for(cfg, ps, &out.report.solver_residual));
  out.next.poly = g.poly();
  out.next.iteration = cfg.iteration + 1;
  out.next.positions = cfg.positions;
  out.targets.resize(cfg.positions.size());
  for (std::size_t i = 0; i < cfg.positions.size(); ++i) {
    for (std::size_t j = 0; j < cfg.positions[i].size(); ++j) {
      const PointId id{static_cast<int>(i), static_cast<int>(j)};
      const Complex target = cfg.position(ps, {id.orbit, id.step + 1});
      out.targets[i].push_back(target);
      out.next.positions[i][j] = pull_back(g, target, cfg.positions[i][j], id, out.report.continued);
      out.report.displacement = std::max(out.report.displacement, std::abs(out.next.positions[i][j] - cfg.positions[i][j]));
    }
  }
  out.report.iteration = out.next.iteration;
  if (cfg.iteration > 0 && cfg.last_displacement > 0) out.report.ratio = out.report.displacement / cfg.last_displacement;
  out.next.last_displacement = out.report.displacement;
  return out;
}

std::vector<ForwardCheck> forward_check(const ExpPolyMap& g, const Configuration& cfg, const PostSingularSet& ps) {
  std::vector<ForwardCheck> out;
  for (int i = 0; i < ps.orbit_count(); ++i) {
    ForwardCheck fc;
    const auto c = classify_orbit(g, cfg.position(ps, {i, 0}), 60);
    fc.escaped = c.escaped;
    if (c.escaped) {
      const auto& a = ps.address(i);
      fc.entries_compared = std::min(c.address.size(), a.depth());
      while (fc.entries_matched < fc.entries_compared && c.address[fc.entries_matched] == a.entry(fc.entries_matched))
        ++fc.entries_matched;
      fc.potential_error = std::fabs(c.potential.extended_value() - ps.base_potential(i).extended_value());
    }
    out.push_back(fc);
  }
  return out;
}

IterationResult iterate(const Configuration& cfg0, const PostSingularSet& ps, Real tol, int max_iter,
                        const StepObserver& observer) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  IterationResult out;
  out.final = cfg0;
  if (std::isinf(tol)) {
    out.converged = true;
    out.diagnosis = "infinite tolerance";
    return out;
  }
  int rising = 0;
  for (int k = 0; k < max_iter; ++k) {
    auto step = sigma_step(out.final, ps);
    if (observer) observer(out.final, step);
    out.history.push_back(step.report);
    out.final = std::move(step.next);
    if (step.report.displacement < tol) {
      out.converged = true;
      out.diagnosis = "converged";
      break;
    }
    rising = step.report.ratio && *step.report.ratio >= 1 ? rising + 1 : 0;
    if (rising >= 10) {
      out.diagnosis = "oscillation: displacement ratio >= 1 for 10 consecutive steps";
      return out;
    }
  }
  if (!out.converged) {
    out.diagnosis = "no convergence within " + std::to_string(max_iter) + " steps";
    return out;
  }
  out.forward = forward_check(ExpPolyMap(out.final.poly), out.final, ps);
  return out;
}

}  // namespace escort
