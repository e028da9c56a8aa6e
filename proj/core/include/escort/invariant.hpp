#pragma once

#include <optional>
#include <string>
#include <vector>

#include "escort/marked.hpp"
#include "escort/potential.hpp"
#include "escort/sampling.hpp"
#include "escort/spider.hpp"
#include "escort/thurston.hpp"
#include "escort/types.hpp"

namespace escort {

struct MRhoEstimate {
  Real t_n = 0;
  Real log_upper = 0;      // log(K e^{d^3 t_n})
  Real log_empirical = 0;  // log of the sampled sup of |g'|
  bool above_rho = false;  // log rho < log empirical
  bool below_upper = false;
};

/// Default K of the M_rho bound: d (1 + L)^d.
Real default_m_rho_constant(int degree, Real L);

/// Samples maps with singular values in D_rho and points on Re z = (d+1) t_n,
/// where rho = (t_n + t_{n+1}) / 2 must be a midpoint of the grid.
MRhoEstimate m_rho_estimate(Rng& rng, Real rho, int degree, const PotentialGrid& grid, Real K,
                            std::size_t maps = 200, std::size_t points = 64);

struct InvariantConstants {
  Real A = 2;
  Real C = 16;
  Real log_M = 0;  // log M_rho
};

struct ConditionResult {
  bool pass = true;
  std::size_t checked = 0;
  std::string worst;   // offending pair or point when failing
  Real margin = 0;     // smallest log-margin (or plain margin for 1, 2)
};

struct InvariantReport {
  Real rho = 0;
  std::vector<int> N;
  ConditionResult c1, c2, c3, c4, c5, c6;
  bool all_pass() const { return c1.pass && c2.pass && c3.pass && c4.pass && c5.pass && c6.pass; }
};

/// Evaluates the six invariant-set conditions for the configuration against the
/// reference set at radius rho. Condition 4 uses the legs of `legs` (reference
/// spider) transported to the current positions; with no legs it is skipped.
InvariantReport invariant_check(const Configuration& cfg, const PostSingularSet& ps, Real rho,
                                const InvariantConstants& k, const std::vector<Leg>& legs = {});

struct SeparationCheck {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  Real min_log_margin = 0;  // log |after| - log(|target| / M)
};

/// |after(x) - after(y)| >= |target(x) - target(y)| / M_rho for numeric pairs
/// whose targets lie in the closed disk of radius max_i |a_i(N_i+1)| + 1.
SeparationCheck separation_step_check(const Configuration& before, const StepResult& step,
                                      const PostSingularSet& ps, const std::vector<int>& N, Real log_M);

}  // namespace escort
