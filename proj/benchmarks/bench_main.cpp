#include <benchmark/benchmark.h>

#include "prk/acw.hpp"
#include "prk/measurement.hpp"
#include "prk/solver.hpp"
#include "prk/spectral_init.hpp"

namespace {

prk::MeasurementSet make_instance(std::size_t n, std::size_t m) {
  prk::Rng rng(42);
  const prk::Signal x = prk::random_signal(n, 1.0, rng);
  return prk::generate_uniform_instance(n, m, x, rng);
}

void BM_PrStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  prk::Rng rng(1);
  prk::Vector z = prk::sample_uniform_sphere(n, rng).coords();
  const prk::Vector a = prk::sample_uniform_sphere(n, rng).coords();
  for (auto _ : state) {
    benchmark::DoNotOptimize(prk::apply_pr_step(z, a, 0.3));
  }
}
BENCHMARK(BM_PrStep)->Arg(10)->Arg(100)->Arg(1000);

void BM_RunIterate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ms = make_instance(n, 20 * n);
  const auto mu = prk::RowMeasure::finite(ms);
  const prk::Vector x0 = prk::Vector::Zero(static_cast<Eigen::Index>(n)).array() + 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prk::run_iterate(mu, x0, 1000, prk::Rng(7)));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_RunIterate)->Arg(10)->Arg(100);

void BM_SymEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ms = make_instance(n, 20 * n);
  const prk::SymMatrix y = prk::build_truncated_matrix(ms);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prk::sym_eig(y));
  }
}
BENCHMARK(BM_SymEig)->Arg(10)->Arg(50);

void BM_TruncatedMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ms = make_instance(n, 20 * n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prk::build_truncated_matrix(ms));
  }
}
BENCHMARK(BM_TruncatedMatrix)->Arg(10)->Arg(50);

void BM_AcwMargin(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ms = make_instance(n, 200 * n);
  const prk::Wedge wedge = prk::canonical_wedge(0.1, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(prk::acw_margin(ms, wedge));
  }
}
BENCHMARK(BM_AcwMargin)->Arg(10);

}  // namespace
BENCHMARK_MAIN();
