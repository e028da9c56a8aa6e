#include <benchmark/benchmark.h>

#include "escort/marked.hpp"
#include "escort/rays.hpp"
#include "escort/roots.hpp"
#include "escort/sampling.hpp"
#include "escort/thurston.hpp"

using namespace escort;

static void BM_PolyRoots(benchmark::State& state) {
  Rng rng(3);
  const auto p = random_map_with_sv_radius(rng, static_cast<int>(state.range(0)), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(poly_roots(p, Complex(1, 2)));
}
BENCHMARK(BM_PolyRoots)->Arg(2)->Arg(3)->Arg(5);

static void BM_TraceRay(benchmark::State& state) {
  const ExpPolyMap g{MonicPolynomial({Complex(0), Complex(-2)})};
  const auto a = ExternalAddress::prefix({0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0});
  const auto t = PotentialRep::from_raw(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(trace_ray(g, a, t, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_TraceRay)->Arg(4)->Arg(8)->Arg(12);

static void BM_SigmaStep(benchmark::State& state) {
  const ExpPolyMap f0{MonicPolynomial({Complex(0), Complex(-2)})};
  const auto a1 = ExternalAddress::prefix({0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0});
  const auto a2 = ExternalAddress::prefix({0, 0, 0, -1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1});
  const auto t = PotentialRep::from_raw(0.4L, 2);
  const auto ps = build_psset(f0, {a1, a2}, {t, t}, 8, 10);
  const auto cfg = capture(ps, f0);
  for (auto _ : state) benchmark::DoNotOptimize(sigma_step(cfg, ps));
}
BENCHMARK(BM_SigmaStep);
BENCHMARK_MAIN();
