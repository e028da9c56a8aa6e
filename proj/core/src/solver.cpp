#include "escort/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "escort/error.hpp"
#include "escort/roots.hpp"

namespace escort {

namespace {

using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

// Ascending coefficients of prod (z - r), leading 1 included.
std::vector<Complex> expand(const std::vector<Complex>& roots, std::size_t skip) {
  std::vector<Complex> c{1};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i == skip) continue;
    std::vector<Complex> next(c.size() + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= roots[i] * c[k];
    }
    c = std::move(next);
  }
  return c;
}

// int_0^x q(w) dw for ascending coefficients q.
Complex integral(const std::vector<Complex>& q, Complex x) {
  Complex acc = 0;
  for (std::size_t k = q.size(); k-- > 0;) acc = acc * x + q[k] / static_cast<Real>(k + 1);
  return acc * x;
}

struct Residual {
  Vec f;
  Real norm = 0;
};

Residual residual(const std::vector<Complex>& c, Complex b0, const std::vector<Complex>& targets) {
  const auto p = MonicPolynomial::from_critical_points(c, b0);
  Residual r;
  r.f.resize(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) {
    r.f(static_cast<Eigen::Index>(k)) = p(c[k]) - targets[k];
    r.norm = std::max(r.norm, std::abs(r.f(static_cast<Eigen::Index>(k))));
  }
  return r;
}

Mat jacobian(const std::vector<Complex>& c, int degree) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Mat J(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto q = expand(c, static_cast<std::size_t>(m));
    for (Eigen::Index k = 0; k < n; ++k)
      J(k, m) = -static_cast<Real>(degree) * integral(q, c[static_cast<std::size_t>(k)]);
  }
  return J;
}

// Newton on p(c_k) = targets_k; true when converged to `tol`.
bool newton(std::vector<Complex>& c, Complex b0, const std::vector<Complex>& targets, int degree, Real tol,
            Real loose, int& steps) {
  for (int it = 0; it < 40; ++it) {
    const auto r = residual(c, b0, targets);
    if (r.norm <= tol) return true;
    Eigen::PartialPivLU<Mat> lu(jacobian(c, degree));
    const Vec dc = lu.solve(-r.f);
    if (!dc.allFinite()) return false;
    Real size = 0;
    for (Eigen::Index k = 0; k < dc.size(); ++k) {
      c[static_cast<std::size_t>(k)] += dc(k);
      size = std::max(size, std::abs(dc(k)));
    }
    ++steps;
    if (size <= 1e-19L) break;
  }
  return residual(c, b0, targets).norm <= loose;
}

}  // namespace

SolveResult solve_poly_from_singular_data(Complex asymptotic, std::span<const Complex> critical, int degree,
                                          const MonicPolynomial& seed) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  if (static_cast<int>(critical.size()) != degree - 1)
    throw Error(ErrorKind::InvalidArgument, "solver needs exactly d - 1 critical targets, got " +
                                                std::to_string(critical.size()));
  if (seed.degree() != degree) throw Error(ErrorKind::InvalidArgument, "seed degree differs");
  SolveResult out;
  if (degree == 1) {
    out.poly = MonicPolynomial({asymptotic});
    return out;
  }

  std::vector<Complex> c = monic_roots(seed.normalized_derivative()).roots;
  // Separate coincident seed critical points so the Jacobian is invertible.
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (std::abs(c[i] - c[k]) < 1e-6L) c[i] += std::polar(Real(1e-3), Real(i));
  const Complex b0_start = seed.coefficient(0);
  std::vector<Complex> start(c.size());
  {
    const auto p0 = MonicPolynomial::from_critical_points(c, b0_start);
    for (std::size_t k = 0; k < c.size(); ++k) start[k] = p0(c[k]);
  }

  // Assign targets to seed critical points by least total displacement.
  std::vector<std::size_t> perm(c.size()), best;
  std::iota(perm.begin(), perm.end(), 0);
  Real best_cost = std::numeric_limits<Real>::infinity();
  do {
    Real cost = 0;
    for (std::size_t k = 0; k < perm.size(); ++k) cost += std::abs(critical[perm[k]] - start[k]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<Complex> goal(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) goal[k] = critical[best[k]];

  Real scale = std::max<Real>(1, std::abs(asymptotic));
  for (const auto& v : critical) scale = std::max(scale, std::abs(v));
  Real lambda = 0, step = 1;
  while (lambda < 1) {
    const Real next = std::min<Real>(1, lambda + step);
    std::vector<Complex> targets(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) targets[k] = (1 - next) * start[k] + next * goal[k];
    const Complex b0 = (1 - next) * b0_start + next * asymptotic;
    std::vector<Complex> trial = c;
    // The last stage polishes to the rounding floor: clustered targets can sit 1e-11 apart.
    const Real tol = next < 1 ? 1e-9L * scale : 1e-18L * scale;
    if (newton(trial, b0, targets, degree, tol, 1e-9L * scale, out.newton_steps)) {
      c = trial;
      lambda = next;
      step = std::min<Real>(1, 2 * step);
    } else {
      step /= 2;
      if (step < 1e-8L) {
        std::ostringstream os;
        os << "continuation stalled at lambda = " << static_cast<double>(lambda);
        throw Error(ErrorKind::SolverFailure, os.str());
      }
    }
  }
  out.poly = MonicPolynomial::from_critical_points(c, asymptotic);
  out.critical_points = c;
  out.residual = residual(c, asymptotic, goal).norm;
  if (out.residual > 1e-10L * scale)
    throw Error(ErrorKind::SolverFailure, "final residual " + std::to_string(static_cast<double>(out.residual)));
  return out;
}

}  // namespace escort
