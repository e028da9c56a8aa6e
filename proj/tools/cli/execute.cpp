#include "execute.hpp"

#include <chrono>

#include "escort/bounds.hpp"
#include "escort/error.hpp"
#include "escort/invariant.hpp"
#include "escort/marked.hpp"
#include "escort/sampling.hpp"

namespace escort::cli {

using nlohmann::json;

namespace {

json num(Real x) { return static_cast<double>(x); }
json cplx(Complex z) { return json::array({num(z.real()), num(z.imag())}); }
json pot(const PotentialRep& t) {
  if (t.is_zero()) return json{{"level", 0}, {"base", 0.0}, {"literal", t.to_string()}};
  return json{{"level", t.level()}, {"base", num(t.base())}, {"literal", t.to_string()}};
}
json pid(PointId id) { return json::array({id.orbit, id.step}); }

json ray_point(const RayPoint& p) {
  json r{{"potential", pot(p.potential)}, {"residual", num(p.residual)}, {"depth", p.depth}};
  r["coordinate"] = p.coordinate ? cplx(*p.coordinate) : json(nullptr);
  return r;
}

json condition(const ConditionResult& c) {
  return json{{"pass", c.pass}, {"checked", c.checked}, {"margin", num(c.margin)}, {"worst", c.worst}};
}

// The condition of the classification argument each error kind relates to.
std::string_view related_condition(ErrorKind k) {
  switch (k) {
    case ErrorKind::SingularCollision: return "escape of singular values";
    case ErrorKind::DegenerateCrossing: return "invariant condition 4 (leg homotopy)";
    case ErrorKind::DegeneratePullback:
    case ErrorKind::BranchAmbiguity:
    case ErrorKind::ContinuationAbort: return "sigma-map pullback";
    case ErrorKind::SolverFailure: return "singular value parametrization";
    case ErrorKind::BranchJump:
    case ErrorKind::NoRay: return "ray continuity";
    case ErrorKind::AddressDepth: return "cluster horizon";
    default: return "";
  }
}

ExpPolyMap spec_map(const RunSpec& spec) { return ExpPolyMap(spec.map_polynomial()); }

PostSingularSet spec_psset(const RunSpec& spec) {
  return build_psset(spec_map(spec), spec.addresses, spec.potentials, spec.numeric_depth, spec.total_depth);
}

json step_record(const StepReport& s) {
  return json{{"type", "step"},
              {"iteration", s.iteration},
              {"displacement", num(s.displacement)},
              {"ratio", s.ratio ? num(*s.ratio) : json(nullptr)},
              {"solver_residual", num(s.solver_residual)},
              {"continued", s.continued}};
}

json poly_record(const MonicPolynomial& p) {
  json c = json::array();
  for (const auto& b : p.lower()) c.push_back(cplx(b));
  return json{{"degree", p.degree()}, {"coefficients", c}, {"literal", p.to_string()}};
}

void trace_ray_cmd(const RunSpec& spec, RunReport& out) {
  const ExpPolyMap g = spec_map(spec);
  for (std::size_t i = 0; i < spec.addresses.size(); ++i) {
    const auto& a = spec.addresses[i];
    const auto& t = spec.potentials[i];
    if (spec.t_hi) {
      auto line = ray_polyline(g, a, t, *spec.t_hi, static_cast<std::size_t>(spec.count),
                               static_cast<std::size_t>(spec.trace_depth));
      json pts = json::array();
      for (const auto& p : line) pts.push_back(ray_point(p));
      out.records.push_back(json{{"type", "ray"}, {"orbit", i}, {"address", a.to_string()}, {"points", pts}});
      out.rays.push_back(std::move(line));
    } else {
      const RayPoint p = trace_ray(g, a, t, static_cast<std::size_t>(spec.trace_depth));
      json r = ray_point(p);
      r["type"] = "ray_point";
      r["orbit"] = i;
      r["address"] = a.to_string();
      out.records.push_back(r);
      out.rays.push_back({p});
    }
  }
}

void classify_cmd(const RunSpec& spec, RunReport& out) {
  const auto c = classify_orbit(spec_map(spec), spec.point, static_cast<std::size_t>(spec.horizon), spec.escape_re);
  out.records.push_back(json{{"type", "classification"},
                             {"point", cplx(spec.point)},
                             {"escaped", c.escaped},
                             {"address", c.address},
                             {"potential", c.escaped ? pot(c.potential) : json(nullptr)},
                             {"iterations", c.iterations}});
}

void clusters_cmd(const RunSpec& spec, RunReport& out) {
  const auto ps = spec_psset(spec);
  const auto clusters = find_clusters(ps);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    json members = json::array(), H = json::array(), L = json::array(), beta_log = json::array();
    for (const auto& m : cl.members) members.push_back(pid(m));
    for (const auto& a : cl.members) {
      json hr = json::array(), lr = json::array(), br = json::array();
      for (const auto& b : cl.members) {
        if (a == b) {
          hr.push_back(nullptr);
          lr.push_back(nullptr);
          br.push_back(nullptr);
          continue;
        }
        try {
          hr.push_back(horizon_H(ps, a, b));
        } catch (const Error&) {
          hr.push_back(nullptr);
        }
        const auto l = history_L(ps, a, b);
        lr.push_back(l ? json(*l) : json(nullptr));
        try {
          br.push_back(num(beta(ps, a, b).log_abs));
        } catch (const Error&) {
          br.push_back(nullptr);
        }
      }
      H.push_back(hr);
      L.push_back(lr);
      beta_log.push_back(br);
    }
    out.records.push_back(json{{"type", "cluster"},
                               {"id", c},
                               {"potential", pot(cl.potential)},
                               {"symbol", cl.symbol},
                               {"members", members},
                               {"H", H},
                               {"L", L},
                               {"beta_log_abs", beta_log}});
    for (std::size_t i = 0; i < cl.members.size(); ++i)
      for (std::size_t j = i + 1; j < cl.members.size(); ++j) {
        const auto a = cl.members[i], b = cl.members[j];
        if (ps.at(a).symbolic() || ps.at(b).symbolic()) continue;
        try {
          const auto e = verify_cluster_estimate(ps, a, b);
          out.records.push_back(json{{"type", "cluster_estimate"},
                                     {"cluster", c},
                                     {"pair", json::array({pid(a), pid(b)})},
                                     {"H", e.H},
                                     {"t", num(e.t)},
                                     {"nu", cplx(e.nu)},
                                     {"delta", cplx(e.delta)},
                                     {"sector_bound", num(e.sector_bound)},
                                     {"nu_in_sector", e.nu_in_sector},
                                     {"delta_in_disk", e.delta_in_disk},
                                     {"difference", num(std::abs(e.difference))}});
        } catch (const Error& err) {
          out.records.push_back(json{{"type", "cluster_estimate"},
                                     {"cluster", c},
                                     {"pair", json::array({pid(a), pid(b)})},
                                     {"skipped", err.what()}});
        }
      }
  }
  const auto br = check_beta_inequalities(ps);
  out.records.push_back(json{{"type", "beta_scan"},
                             {"j0", br.j0 ? json(*br.j0) : json(nullptr)},
                             {"pairs", br.pairs},
                             {"excluded", br.excluded},
                             {"min_lower_ratio", num(br.min_lower_ratio)},
                             {"max_upper_ratio", num(br.max_upper_ratio)},
                             {"any_same_cluster", br.any_same_cluster}});
  const auto pr = good_partition_radius(ps);
  json rhos = json::array();
  for (auto r : pr.rho) rhos.push_back(num(r));
  out.records.push_back(json{{"type", "partition_radius"},
                             {"conclusive", pr.conclusive},
                             {"t_prime", num(pr.t_prime)},
                             {"rho", rhos},
                             {"N", pr.N},
                             {"gap_margin", num(pr.gap_margin)},
                             {"modulus_margin", num(pr.modulus_margin)}});
  if (!br.j0 || !pr.conclusive) out.exit_code = kInconclusive;
}

void solve_cmd(const RunSpec& spec, RunReport& out) {
  const ExpPolyMap f0 = spec_map(spec);
  const auto ps = spec_psset(spec);
  const auto cfg0 = capture(ps, f0);
  const auto result = iterate(cfg0, ps, spec.tolerance, spec.max_iter);
  for (const auto& s : result.history) out.records.push_back(step_record(s));
  out.history = result.history;
  json sol = poly_record(result.final.poly);
  sol["type"] = "solution";
  sol["converged"] = result.converged;
  sol["iterations"] = result.history.size();
  out.records.push_back(sol);
  if (!result.converged) {
    out.records.push_back(json{{"type", "diagnosis"}, {"kind", "NonConvergence"}, {"message", result.diagnosis},
                               {"condition", "sigma-map contraction"}});
    out.exit_code = kNumericalFailure;
    return;
  }
  const auto fc = forward_check(ExpPolyMap(result.final.poly), result.final, ps);
  for (std::size_t i = 0; i < fc.size(); ++i)
    out.records.push_back(json{{"type", "forward_check"},
                               {"orbit", i},
                               {"escaped", fc[i].escaped},
                               {"entries_compared", fc[i].entries_compared},
                               {"entries_matched", fc[i].entries_matched},
                               {"potential_error", num(fc[i].potential_error)}});
}

SpiderPayload spider_payload(const ExpPolyMap& g, const PostSingularSet& ps, std::optional<Real> rho) {
  SpiderPayload s;
  s.legs = standard_spider(g, ps);
  s.points = labeled_points(ps);
  s.rho = rho;
  return s;
}

std::optional<Real> resolve_rho(const RunSpec& spec, const PostSingularSet& ps) {
  if (spec.rho) return spec.rho;
  const auto pr = good_partition_radius(ps);
  if (pr.conclusive && !pr.rho.empty()) return pr.rho.front();
  return std::nullopt;
}

void check_invariant_cmd(const RunSpec& spec, RunReport& out, Rng& rng) {
  const ExpPolyMap f0 = spec_map(spec);
  const auto ps = spec_psset(spec);
  const auto rho = resolve_rho(spec, ps);
  if (!rho) {
    out.records.push_back(json{{"type", "threshold_scan"}, {"conclusive", false}});
    out.exit_code = kInconclusive;
    return;
  }
  std::vector<Real> pots;
  for (const auto& p : ps.points())
    if (std::isfinite(p.potential.extended_value())) pots.push_back(p.potential.extended_value());
  const Real L = spec.L ? *spec.L : estimate_coefficient_constant(rng, spec.degree, *rho, 200) + 1;
  const Real K = spec.K ? *spec.K : default_m_rho_constant(spec.degree, L);
  const auto m = m_rho_estimate(rng, *rho, spec.degree, PotentialGrid(pots), K);
  out.records.push_back(json{{"type", "m_rho"},
                             {"rho", num(*rho)},
                             {"L", num(L)},
                             {"K", num(K)},
                             {"t_n", num(m.t_n)},
                             {"log_empirical", num(m.log_empirical)},
                             {"log_upper", num(m.log_upper)},
                             {"above_rho", m.above_rho},
                             {"below_upper", m.below_upper}});
  InvariantConstants k;
  k.A = spec.A;
  k.C = spec.C;
  k.log_M = m.log_empirical;
  auto spider = spider_payload(f0, ps, rho);
  const auto rep = invariant_check(capture(ps, f0), ps, *rho, k, spider.legs);
  out.records.push_back(json{{"type", "invariant"},
                             {"rho", num(rep.rho)},
                             {"N", rep.N},
                             {"c1", condition(rep.c1)},
                             {"c2", condition(rep.c2)},
                             {"c3", condition(rep.c3)},
                             {"c4", condition(rep.c4)},
                             {"c5", condition(rep.c5)},
                             {"c6", condition(rep.c6)},
                             {"all_pass", rep.all_pass()}});
  out.spider = std::move(spider);
  if (!rep.all_pass()) out.exit_code = kNumericalFailure;
}

void verify_bounds_cmd(const RunSpec& spec, RunReport& out, Rng& rng) {
  const int d = spec.degree;
  const Real rho = spec.rho ? *spec.rho : 1000;
  const Real L = spec.L ? *spec.L : estimate_coefficient_constant(rng, d, rho, 1000) + 1;
  out.records.push_back(json{{"type", "bounds_setup"}, {"degree", d}, {"rho", num(rho)}, {"L", num(L)}});
  bool violated = false, below = false;
  for (int n = 0; n < spec.samples; ++n) {
    const auto p = random_map_with_sv_radius(rng, d, rho);
    json r{{"type", "bounds_sample"}, {"sample", n}, {"polynomial", p.to_string()}};
    const auto cb = check_coeff_bounds(p, rho, L);
    Real worst = std::numeric_limits<Real>::infinity();
    for (const auto& c : cb.coefficients) worst = std::min(worst, c.ratio);
    r["coeff"] = json{{"pass", cb.pass}, {"sv_radius", num(cb.sv_radius)}, {"min_ratio", num(worst)}};
    const auto od = check_outer_disk(p, rho, rho, 256);
    r["outer_disk"] = json{{"pass", od.pass}, {"max_root_modulus", num(od.max_root_modulus)},
                           {"below_threshold", od.below_threshold}};
    const Complex alpha = random_in_disk(rng, rho);
    try {
      const auto rs = root_separation(p, alpha, 1, rho);
      r["root_separation"] = json{{"pass", rs.pass}, {"actual_min", num(rs.actual_min)}, {"bound", num(rs.bound)}};
      violated = violated || !rs.pass;
    } catch (const Error& e) {
      r["root_separation"] = json{{"skipped", e.what()}};
    }
    if (d > 1) {
      const Complex w = random_in_disk(rng, 2 * rho);
      try {
        const auto fs = fiber_separation(ExpPolyMap(p), w, 1, rho, ImWindow{});
        r["fiber_separation"] = json{{"pass", fs.pass}, {"actual_min", num(fs.actual_min)}, {"bound", num(fs.bound)}};
        violated = violated || !fs.pass;
      } catch (const Error& e) {
        r["fiber_separation"] = json{{"skipped", e.what()}};
      }
    }
    violated = violated || !cb.pass || (!od.pass && !od.below_threshold);
    below = below || od.below_threshold;
    out.records.push_back(r);
  }
  if (violated) {
    out.records.push_back(json{{"type", "diagnosis"}, {"kind", "BoundViolation"},
                               {"message", "a sampled instance violates a bound"}, {"condition", "appendix bounds"}});
    out.exit_code = kNumericalFailure;
  } else if (below) {
    out.exit_code = kInconclusive;
  }
}

void plot_cmd(const RunSpec& spec, RunReport& out) {
  const ExpPolyMap g = spec_map(spec);
  const auto ps = spec_psset(spec);
  auto spider = spider_payload(g, ps, resolve_rho(spec, ps));
  for (const auto& leg : spider.legs) {
    json r{{"type", "leg"}, {"foot", pid(leg.foot)}, {"label", point_label(ps, leg.foot)},
           {"vertices", leg.vertices.size()}, {"clearance", num(leg.clearance)}};
    try {
      r["word"] = leg_word(labeled_points(ps, leg.foot), leg).to_string();
    } catch (const Error& e) {
      r["word"] = nullptr;
      r["skipped"] = e.what();
    }
    out.records.push_back(r);
  }
  out.spider = std::move(spider);
}

}  // namespace

RunReport execute(const RunSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  RunReport out;
  out.command = spec.command;
  out.records.push_back(json{{"type", "run"},
                             {"command", spec.command},
                             {"seed", spec.seed},
                             {"word_encoding", kWordEncoding},
                             {"spec", print_spec(spec)}});
  Rng rng(spec.seed);
  try {
    if (spec.command == "trace-ray") trace_ray_cmd(spec, out);
    else if (spec.command == "classify") classify_cmd(spec, out);
    else if (spec.command == "clusters") clusters_cmd(spec, out);
    else if (spec.command == "solve") solve_cmd(spec, out);
    else if (spec.command == "check-invariant") check_invariant_cmd(spec, out, rng);
    else if (spec.command == "verify-bounds") verify_bounds_cmd(spec, out, rng);
    else if (spec.command == "plot") plot_cmd(spec, out);
    else throw Error(ErrorKind::Validation, "unknown command '" + spec.command + "'");
  } catch (const Error& e) {
    const bool invalid = e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::Parse ||
                         e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::PreconditionViolated ||
                         e.kind() == ErrorKind::InsufficientDepth;
    out.records.push_back(json{{"type", "diagnosis"},
                               {"kind", std::string(to_string(e.kind()))},
                               {"message", e.what()},
                               {"condition", std::string(related_condition(e.kind()))}});
    out.exit_code = invalid ? kValidationFailure : kNumericalFailure;
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace escort::cli
