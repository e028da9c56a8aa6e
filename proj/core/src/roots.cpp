#include "escort/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "escort/error.hpp"

namespace escort {

namespace {

constexpr int kMaxAberthIterations = 500;
constexpr Real kEps = std::numeric_limits<Real>::epsilon();

struct Evaluation {
  Complex value;
  Complex derivative;
};

Evaluation horner(const std::vector<Complex>& lower, Complex z) {
  Complex v(1), dv(0);
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) {
    dv = dv * z + v;
    v = v * z + *it;
  }
  return {v, dv};
}

Real magnitude(const std::vector<Complex>& lower, Real r) {
  Real acc = 1;
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Real tolerance(const std::vector<Complex>& lower, Complex z, Real alpha_scale) {
  return std::max(1e-10L * std::max<Real>(1, alpha_scale), 64 * kEps * magnitude(lower, std::abs(z)));
}

bool aberth(const std::vector<Complex>& lower, std::vector<Complex>& z) {
  const std::size_t n = lower.size();
  for (std::size_t k = 0; k < n; ++k)
    z[k] = std::polar<Real>(1, kTwoPi * static_cast<Real>(k) / static_cast<Real>(n) + 0.4L);
  for (int it = 0; it < kMaxAberthIterations; ++it) {
    Real max_step = 0;
    for (std::size_t k = 0; k < n; ++k) {
      auto [v, dv] = horner(lower, z[k]);
      if (v == Complex(0)) continue;
      Complex ratio = v / dv;
      Complex sum(0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += Complex(1) / (z[k] - z[j]);
      Complex step = ratio / (Complex(1) - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / (1 + std::abs(z[k])));
    }
    if (max_step < 4 * kEps) return true;
  }
  return true;  // certification decides
}

std::vector<Complex> companion(const std::vector<Complex>& lower) {
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const auto n = static_cast<Eigen::Index>(lower.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = Complex(1);
  for (Eigen::Index i = 0; i < n; ++i) m(i, n - 1) = -lower[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Matrix> solver(m, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

void polish(const std::vector<Complex>& lower, std::vector<Complex>& z) {
  for (auto& r : z) {
    for (int i = 0; i < 3; ++i) {
      auto [v, dv] = horner(lower, r);
      if (std::abs(dv) == 0) break;
      Complex next = r - v / dv;
      if (std::abs(horner(lower, next).value) >= std::abs(v)) break;
      r = next;
    }
  }
}

std::vector<RootCluster> group(const std::vector<Complex>& roots) {
  std::vector<RootCluster> out;
  std::vector<Complex> sums;
  for (const Complex& r : roots) {
    bool placed = false;
    for (std::size_t i = 0; i < out.size() && !placed; ++i) {
      if (std::abs(out[i].value - r) <= kMultiplicityTolerance * std::max<Real>(1, std::abs(r))) {
        sums[i] += r;
        ++out[i].multiplicity;
        out[i].value = sums[i] / static_cast<Real>(out[i].multiplicity);
        placed = true;
      }
    }
    if (!placed) {
      out.push_back({r, 1});
      sums.push_back(r);
    }
  }
  return out;
}

RootSet solve(const std::vector<Complex>& lower, Real alpha_scale) {
  RootSet out;
  const std::size_t n = lower.size();
  if (n == 0) return out;
  if (n == 1) {
    out.roots = {-lower[0]};
    out.distinct = {{-lower[0], 1}};
    return out;
  }
  // Rescale z = lambda u so the scaled coefficients are O(1).
  Real lambda = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (lower[k] != Complex(0))
      lambda = std::max(lambda, std::pow(std::abs(lower[k]), 1 / static_cast<Real>(n - k)));
  if (lambda == 0) {
    out.roots.assign(n, Complex(0));
    out.distinct = {{Complex(0), static_cast<int>(n)}};
    return out;
  }
  std::vector<Complex> scaled(n);
  for (std::size_t k = 0; k < n; ++k) scaled[k] = lower[k] / std::pow(lambda, static_cast<Real>(n - k));

  auto certify = [&](std::vector<Complex>& u) {
    for (auto& r : u) r *= lambda;
    polish(lower, u);
    Real worst = 0;
    bool ok = true;
    for (const auto& r : u) {
      Real res = std::abs(horner(lower, r).value);
      worst = std::max(worst, res);
      if (!(res <= tolerance(lower, r, alpha_scale))) ok = false;
    }
    out.max_residual = worst;
    return ok;
  };

  std::vector<Complex> u(n);
  bool ok = aberth(scaled, u) && certify(u);
  if (!ok) {
    u = companion(scaled);
    out.used_companion = true;
    ok = certify(u);
  }
  if (!ok)
    throw Error(ErrorKind::NonConvergence,
                "root finder residual " + std::to_string(static_cast<double>(out.max_residual)) +
                    " above certification tolerance");
  out.roots = std::move(u);
  out.distinct = group(out.roots);
  return out;
}

}  // namespace

RootSet poly_roots(const MonicPolynomial& p, Complex alpha) {
  return solve(p.shifted(alpha).lower(), std::abs(alpha));
}

RootSet monic_roots(const std::vector<Complex>& lower) { return solve(lower, 0); }

}  // namespace escort
