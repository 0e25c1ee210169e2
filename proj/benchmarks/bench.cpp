#include <benchmark/benchmark.h>

#include <random>

#include "hm/analysis.hpp"
#include "hm/gallery.hpp"
#include "hm/grid.hpp"
#include "hm/reduction.hpp"
#include "hm/solver.hpp"
#include "hm/spec_file.hpp"

using namespace hm;

static void BM_poly_roots(benchmark::State& state) {
  std::mt19937_64 g(7);
  std::vector<cplx> c(static_cast<std::size_t>(state.range(0)) + 1);
  for (auto& x : c) x = unit_box_complex(g);
  for (auto _ : state) benchmark::DoNotOptimize(poly_roots(c));
}
BENCHMARK(BM_poly_roots)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_newton_solve(benchmark::State& state, const char* name) {
  const auto item = build_gallery(name);
  const ImplicitSystem sys = build_system(item.spec);
  const PointQ p = make_point_grid(sys, item.spec.region, 2).front();
  for (auto _ : state) benchmark::DoNotOptimize(solve_at(sys, p, item.spec.seed_z));
}
BENCHMARK_CAPTURE(BM_newton_solve, ex6d, "ex6d");
BENCHMARK_CAPTURE(BM_newton_solve, exS6, "exS6");
BENCHMARK_CAPTURE(BM_newton_solve, exS7, "exS7");

static void BM_verify_grid(benchmark::State& state, const char* name) {
  const auto item = build_gallery(name);
  const ImplicitSystem sys = build_system(item.spec);
  const auto grid = make_point_grid(sys, item.spec.region, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_grid(sys, grid, item.spec.seed_z));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK_CAPTURE(BM_verify_grid, exR5, "exR5")->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_verify_grid, exS7, "exS7")->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
