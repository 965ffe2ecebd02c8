#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "helidrop/classify.hpp"
#include "helidrop/mesh.hpp"
#include "helidrop/polynomial.hpp"
#include "helidrop/profile.hpp"
#include "helidrop/quadrature.hpp"
#include "helidrop/stability.hpp"

using namespace helidrop;

namespace {

const Params kLoop = Params::case_two(0.2, 0.15, -0.9);

FundamentalPieceSpec lowest(const Params& p) {
  return make_spec(p, isolate_roots(build_quartic(p)).intervals.at(0));
}

void BM_IsolateRoots(benchmark::State& state) {
  const Quartic q = build_quartic(kLoop);
  for (auto _ : state) benchmark::DoNotOptimize(isolate_roots(q));
}
BENCHMARK(BM_IsolateRoots);

void BM_Thresholds(benchmark::State& state) {
  double a = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(thresholds(a));
    a = a < 0.29 ? a + 0.001 : 0.01;
  }
}
BENCHMARK(BM_Thresholds);

void BM_DeltaTheta(benchmark::State& state) {
  const FundamentalPieceSpec s = lowest(kLoop);
  for (auto _ : state) benchmark::DoNotOptimize(delta_theta(s));
}
BENCHMARK(BM_DeltaTheta);

void BM_DeltaThetaDirect(benchmark::State& state) {
  const FundamentalPieceSpec s = lowest(kLoop);
  for (auto _ : state) benchmark::DoNotOptimize(delta_theta_direct(s));
}
BENCHMARK(BM_DeltaThetaDirect);

void BM_IntegratePiece(benchmark::State& state) {
  const FundamentalPieceSpec s = lowest(kLoop);
  PieceOptions opt;
  opt.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_piece(s, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegratePiece)->Arg(512)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_DeltaThetaProfile(benchmark::State& state) {
  const Params base = Params::case_two(0.2, 0.15, 0.0);
  const auto [lo, hi] = default_scan_range(base);
  std::vector<double> grid(256);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / 255.0;
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(delta_theta_profile(base, grid, threads));
}
BENCHMARK(BM_DeltaThetaProfile)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolveForAngle(benchmark::State& state) {
  const Params base = Params::case_two(0.2, 0.15, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_for_angle(base, std::numbers::pi / 2));
}
BENCHMARK(BM_SolveForAngle)->Unit(benchmark::kMillisecond);

void BM_StabilityReport(benchmark::State& state) {
  PieceOptions opt;
  opt.samples = 2048;
  const StabilityInput in{integrate_piece(lowest(kLoop), opt), 1.0, kLoop};
  for (auto _ : state) benchmark::DoNotOptimize(stability_report(in));
}
BENCHMARK(BM_StabilityReport)->Unit(benchmark::kMicrosecond);

void BM_BuildPatchAndFlux(benchmark::State& state) {
  PieceOptions opt;
  opt.samples = 512;
  const ProfileCurve piece = integrate_piece(lowest(kLoop), opt);
  for (auto _ : state) {
    const SurfacePatch patch = build_patch(piece, -0.5, 0.5, 64);
    benchmark::DoNotOptimize(flux_integrals(patch));
  }
}
BENCHMARK(BM_BuildPatchAndFlux)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
