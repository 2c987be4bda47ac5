#include <benchmark/benchmark.h>

#include <random>

#include "finiteband/flow.hpp"
#include "finiteband/kdv.hpp"

using namespace finiteband;

namespace {

CMatrix hermitian(Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

const BandStructure kBands({0.0, 1.0, 2.0});

}  // namespace

static void BM_HermEig(benchmark::State& state) {
  const CMatrix a = hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(a));
}
BENCHMARK(BM_HermEig)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_WeierstrassEval(benchmark::State& state) {
  const Weierstrass wp(curve_from_bands(kBands));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wp.eval(Complex(x, 0.7)));
    x += 0.013;
    if (x > 3.0) x = 0.0;
  }
}
BENCHMARK(BM_WeierstrassEval);

static void BM_HochstadtJet(benchmark::State& state) {
  const HochstadtPotential q({kBands.edges(), {0.2, 0.9, 1.5, 2.1}, random_unitary(4, 3)});
  for (auto _ : state) benchmark::DoNotOptimize(q.jet(0.37, 3));
}
BENCHMARK(BM_HochstadtJet);

static void BM_IntegrateFundamental(benchmark::State& state) {
  const HochstadtPotential q({kBands.edges(), std::vector<double>(static_cast<std::size_t>(state.range(0)), 0.4),
                              random_unitary(static_cast<std::size_t>(state.range(0)), 5)});
  for (auto _ : state) benchmark::DoNotOptimize(integrate_fundamental(q, Complex(0.5, 1.0), 0.0, {q.period()}));
}
BENCHMARK(BM_IntegrateFundamental)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_EvolvePencils(benchmark::State& state) {
  const HochstadtPotential q({kBands.edges(), {0.3, 1.2}, random_unitary(2, 7)});
  const auto q0 = closed_form_pencils(q.jet(0.0, 2), kBands);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_pencils(q0, 0.0, {q.period()}));
}
BENCHMARK(BM_EvolvePencils)->Unit(benchmark::kMillisecond);

static void BM_FloquetEdges(benchmark::State& state) {
  const HochstadtPotential q({kBands.edges(), {0.0}, {}});
  for (auto _ : state) benchmark::DoNotOptimize(floquet_band_edges(q, q.period(), -0.5, 3.5));
}
BENCHMARK(BM_FloquetEdges)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_ReflectionlessCheck(benchmark::State& state) {
  const HochstadtPotential q({kBands.edges(), {0.3, 1.2}, random_unitary(2, 7)});
  const auto quad = closed_form_pencils(q.jet(0.0, 2), kBands);
  auto mp = [&](Complex z) { return weyl_m(quad, z, Sign::Plus); };
  auto mm = [&](Complex z) { return weyl_m(quad, z, Sign::Minus); };
  for (auto _ : state) benchmark::DoNotOptimize(reflectionless_check(mp, mm, kBands, {0.3, 0.6, 2.5, 4.0}));
}
BENCHMARK(BM_ReflectionlessCheck);

static void BM_SkdvExact(benchmark::State& state) {
  const HochstadtPotential q({kBands.edges(), {0.3, 1.2}, random_unitary(2, 7)});
  const auto jet = q.jet(0.5, 3);
  const auto c = c_coeffs(kBands, 1);
  for (auto _ : state) benchmark::DoNotOptimize(skdv_exact(jet, c, 1));
}
BENCHMARK(BM_SkdvExact);

BENCHMARK_MAIN();
