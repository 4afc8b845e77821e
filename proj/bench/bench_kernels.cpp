// Serial reference vs OpenMP-parallel kernels. Results are identical by construction;
// only wall time differs.
#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "ddrom/h2.hpp"
#include "ddrom/informativity.hpp"
#include "ddrom/models.hpp"

using namespace ddrom;

namespace
{

Execution exec_of(const benchmark::State &state)
{
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State &state)
{
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

Vector gaussian(Index length, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector u(length);
  for (Index k = 0; k < length; k++)
  {
    u(k) = g(rng);
  }
  return u;
}

std::vector<Complex> circle_points(Index count, double modulus)
{
  std::vector<Complex> pts;
  for (Index k = 0; k < count; k++)
  {
    pts.push_back(std::polar(modulus, std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(count)));
  }
  return pts;
}

void BM_H2Quadrature(benchmark::State &state)
{
  const DiscreteLTI sys = random_stable_system(100, 0.95, 1);
  QuadratureOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(h2_norm_quadrature(sys, opts).norm);
  }
  label(state);
}
BENCHMARK(BM_H2Quadrature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RecoverBatch(benchmark::State &state)
{
  const DiscreteLTI sys = random_stable_system(50, 0.9, 2);
  const FrequencyRecovery rec(simulate(sys, gaussian(501, 3)), 100);
  const std::vector<Complex> pts = circle_points(64, 1.0);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(rec.recover_batch(pts, true, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_RecoverBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Structured projection solve against the dense Householder reference.
void BM_SolveMethod(benchmark::State &state)
{
  const DiscreteLTI sys = random_stable_system(50, 0.9, 4);
  RecoveryOptions opts;
  opts.method = state.range(0) == 0 ? SolveMethod::DenseQR : SolveMethod::Projection;
  const FrequencyRecovery rec(simulate(sys, gaussian(501, 5)), 100, opts);
  const std::vector<Complex> pts = circle_points(16, 1.0);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(rec.recover_batch(pts, true, Execution::Serial));
  }
  state.SetLabel(state.range(0) == 0 ? "dense-qr" : "projection");
}
BENCHMARK(BM_SolveMethod)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
