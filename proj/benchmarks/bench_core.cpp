#include <benchmark/benchmark.h>

#include "genquot/body.hpp"
#include "genquot/linalg.hpp"
#include "genquot/linprog.hpp"
#include "genquot/random.hpp"
#include "genquot/snumbers.hpp"

using namespace genquot;

namespace {

void BM_Svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix m = gaussian_matrix(n, n, 1.0, {1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_SolveLp(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Matrix a = gaussian_matrix(m, 4 * m, 1.0, {2, 0});
  Rng rng({2, 1});
  Vector x0(4 * m);
  for (auto& x : x0) x = rng.uniform();
  const LPProblem p{a, a * x0, Vector(4 * m, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(p));
}
BENCHMARK(BM_SolveLp)->Arg(4)->Arg(16)->Arg(36);

void BM_BodyNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomQuotientBody body = make_body(n, n * n, {3, 0});
  Rng rng({3, 1});
  const Vector x = gaussian_vector(n, 1.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(body_norm(body, x));
}
BENCHMARK(BM_BodyNorm)->Arg(8)->Arg(16)->Arg(36);

void BM_OperatorNorm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomQuotientBody body = make_body(n, 2 * n, {4, 0});
  const Matrix t = gaussian_matrix(n, n, 1.0 / static_cast<double>(n), {4, 1});
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(body, t));
}
BENCHMARK(BM_OperatorNorm)->Arg(8)->Arg(16)->Arg(32);

void BM_MinOverShifts(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const RandomQuotientBody body = make_body(n, 2 * n, {5, 0});
  const Matrix t = gaussian_matrix(n, n, 1.0 / static_cast<double>(n), {5, 1});
  for (auto _ : state) benchmark::DoNotOptimize(min_over_shifts(body, t, n / 2, 41));
}
BENCHMARK(BM_MinOverShifts)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
