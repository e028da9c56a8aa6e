#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "escort/expoly.hpp"
#include "escort/marked.hpp"
#include "escort/polynomial.hpp"
#include "escort/types.hpp"

namespace escort {

/// One state of the pullback iteration: positions of the numeric marked
/// points (the symbolic tail stays pinned) and the current polynomial.
struct Configuration {
  std::vector<std::vector<Complex>> positions;
  MonicPolynomial poly;
  int iteration = 0;
  Real last_displacement = 0;

  Complex position(const PostSingularSet& ps, PointId id) const;
};

struct StepReport {
  int iteration = 0;
  Real displacement = 0;  // sup over numeric points
  std::optional<Real> ratio;
  Real solver_residual = 0;
  int continued = 0;  // pullbacks resolved by branch continuation
};

/// Positions start at the reference points a_ij; the polynomial is f0's.
Configuration capture(const PostSingularSet& ps, const ExpPolyMap& f0);

/// Singular-value targets: orbit 0 asymptotic, the rest critical.
MonicPolynomial solve_for(const Configuration& cfg, const PostSingularSet& ps, Real* residual = nullptr);

struct StepResult {
  Configuration next;
  StepReport report;
  /// Target of each pulled-back point (the previous position of a_i(j+1)).
  std::vector<std::vector<Complex>> targets;
};

/// One pullback: solve the new map for the current singular values, then lift
/// every a_i(j+1) to the nearest preimage of the previous a_ij.
StepResult sigma_step(const Configuration& cfg, const PostSingularSet& ps);

struct ForwardCheck {
  bool escaped = false;
  std::size_t entries_compared = 0;
  std::size_t entries_matched = 0;  // leading entries equal to the address
  Real potential_error = 0;
};

struct IterationResult {
  bool converged = false;
  std::string diagnosis;
  Configuration final;
  std::vector<StepReport> history;
  std::vector<ForwardCheck> forward;  // one per orbit, on convergence
};

/// Runs sigma_step until the displacement drops below tol (or max_iter).
/// Stops early when the ratio stays >= 1 for 10 consecutive steps.
/// `observer` sees every step with the configuration it started from.
using StepObserver = std::function<void(const Configuration& before, const StepResult& step)>;
IterationResult iterate(const Configuration& cfg0, const PostSingularSet& ps, Real tol, int max_iter,
                        const StepObserver& observer = {});

/// classify_orbit of each singular value of g against the orbit data.
std::vector<ForwardCheck> forward_check(const ExpPolyMap& g, const Configuration& cfg, const PostSingularSet& ps);

}  // namespace escort
