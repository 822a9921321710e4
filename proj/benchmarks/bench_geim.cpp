#include "fixtures.hpp"

#include "geim/analysis.hpp"
#include "geim/interp.hpp"
#include "geim/rates.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace geim;

namespace {

GreedyResult run(const test::GaussianSetup& s, NormMode mode, std::size_t n) {
  GreedyConfig cfg;
  cfg.n_max = n;
  cfg.mode = mode;
  return run_geim(s.F, s.sigmas, cfg);
}

void BM_GreedyHilbert(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Hilbert);
  for (auto _ : state) benchmark::DoNotOptimize(run(s, NormMode::Hilbert, state.range(0)));
}
BENCHMARK(BM_GreedyHilbert)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_GreedySup(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Sup);
  for (auto _ : state) benchmark::DoNotOptimize(run(s, NormMode::Sup, state.range(0)));
}
BENCHMARK(BM_GreedySup)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Interpolate(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Hilbert);
  const GreedyResult r = run(s, NormMode::Hilbert, 20);
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(s.F[7], r, 20));
}
BENCHMARK(BM_Interpolate);

void BM_LebesgueSup(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Sup);
  const GreedyResult r = run(s, NormMode::Sup, 20);
  for (auto _ : state) benchmark::DoNotOptimize(lebesgue_sup(r, 20));
}
BENCHMARK(BM_LebesgueSup)->Unit(benchmark::kMicrosecond);

void BM_TauSup(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Sup);
  const GreedyResult r = run(s, NormMode::Sup, 10);
  for (auto _ : state) benchmark::DoNotOptimize(compute_tau(s.F, r, NormMode::Sup));
}
BENCHMARK(BM_TauSup)->Unit(benchmark::kMillisecond);

void BM_Widths(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Hilbert);
  WidthOptions opt;
  opt.polish = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(compute_widths(s.F, 20, NormMode::Hilbert, opt));
}
BENCHMARK(BM_Widths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AuditSweep(benchmark::State& state) {
  test::GaussianSetup s(NormMode::Hilbert);
  const AnalysisReport rep = analyze_run(s.F, run(s, NormMode::Hilbert, 20));
  AuditOptions opt;
  opt.sweep_theorem = true;
  for (auto _ : state) benchmark::DoNotOptimize(audit_run(rep, opt));
}
BENCHMARK(BM_AuditSweep)->Unit(benchmark::kMillisecond);

void BM_ProjectionLemma(benchmark::State& state) {
  const auto K = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K), W(K, K / 2);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) G(i, j) = N(rng);
  for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = N(rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(projection_lemma_check(G, W, static_cast<std::size_t>(K / 2)));
}
BENCHMARK(BM_ProjectionLemma)->Arg(4)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
