#include "lismodes/capacity.hpp"
#include "lismodes/emkernel.hpp"
#include "lismodes/geometry.hpp"
#include "lismodes/linkbudget.hpp"
#include "lismodes/modes.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace lismodes;

namespace {

const Wave wave28 = Wave::from_frequency(28e9);

// equal squares of side n_lambda wavelengths, lambda/4 mesh
CouplingMatrix square_link(double n_lambda, double d_lambda) {
  const double lam = wave28.wavelength();
  const Mesh tx = build_mesh(Surface::axis_aligned(Vec3::Zero(), n_lambda * lam, n_lambda * lam), lam / 4);
  const Mesh rx =
      build_mesh(Surface::axis_aligned(Vec3(0, 0, d_lambda * lam), n_lambda * lam, n_lambda * lam), lam / 4);
  return assemble_coupling_matrix(tx, rx, wave28);
}

void BM_Assemble(benchmark::State& state) {
  const double lam = wave28.wavelength();
  const double side = static_cast<double>(state.range(0)) * lam;
  const Mesh tx = build_mesh(Surface::axis_aligned(Vec3::Zero(), side, side), lam / 4);
  const Mesh rx = build_mesh(Surface::axis_aligned(Vec3(0, 0, 30 * lam), side, side), lam / 4);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_coupling_matrix(tx, rx, wave28));
  state.counters["entries"] = static_cast<double>(tx.size() * rx.size());
}
BENCHMARK(BM_Assemble)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ExactSpectrum(benchmark::State& state) {
  const CouplingMatrix k = square_link(static_cast<double>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(mode_spectrum(k));
}
BENCHMARK(BM_ExactSpectrum)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_RandomizedSpectrum(benchmark::State& state) {
  const CouplingMatrix k = square_link(10, 30);
  SvdOptions opts;
  opts.method = SvdMethod::randomized;
  opts.k_max = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mode_spectrum(k, opts));
}
BENCHMARK(BM_RandomizedSpectrum)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GainExact(benchmark::State& state) {
  const double side = static_cast<double>(state.range(0));
  const Surface rx = Surface::axis_aligned(Vec3(0, 0, 1), side, side);
  for (auto _ : state) benchmark::DoNotOptimize(gain_exact(rx, Vec3::Zero(), Vec3::UnitX(), 1e-9));
}
BENCHMARK(BM_GainExact)->Arg(2)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_Waterfill(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-4, 1.0);
  std::vector<double> g(static_cast<std::size_t>(state.range(0)));
  for (double& x : g) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(waterfill(g, 0.01, 1.0));
}
BENCHMARK(BM_Waterfill)->Arg(16)->Arg(256);

}  // namespace
BENCHMARK_MAIN();
