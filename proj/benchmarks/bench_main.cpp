#include <benchmark/benchmark.h>

#include <numbers>

#include "ddalab/dda.hpp"
#include "ddalab/integrators.hpp"
#include "ddalab/lorenz.hpp"
#include "ddalab/nse2d.hpp"
#include "ddalab/nse_bounds.hpp"

namespace lz = ddalab::lorenz;
namespace ns = ddalab::nse;

namespace {

ns::Solver make_solver(int n) {
  const ns::FourierGrid g(n, 2 * std::numbers::pi);
  return ns::Solver(g, {0.01, ns::shell_forcing(g, 16.0, 25.0, 0.5, 7)});
}

void BM_LorenzRk4Step(benchmark::State& state) {
  const lz::System sys(lz::Params::standard());
  lz::State u{1.0, 1.0, 1.0};
  for (auto _ : state) {
    u = ddalab::rk4_step(sys, u, 1e-3);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_LorenzRk4Step);

void BM_LorenzAssimilationWindow(benchmark::State& state) {
  const lz::Params p = lz::Params::standard();
  const lz::System sys(p);
  const auto U0 = lz::attractor_point(p, 1, 20.0, {ddalab::Scheme::RK4, 1e-3});
  const auto sched = ddalab::Schedule::uniform(0.0, 0.1, 100);
  for (auto _ : state) {
    auto s = ddalab::dda::run(sys, U0, lz::proj_X(), sched, lz::State{}, {});
    benchmark::DoNotOptimize(s.verdict);
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_LorenzAssimilationWindow)->Unit(benchmark::kMillisecond);

void BM_NseNonlinear(benchmark::State& state) {
  const auto s = make_solver(static_cast<int>(state.range(0)));
  const auto u = ns::random_field(s.grid(), 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(s.B_self(u));
}
BENCHMARK(BM_NseNonlinear)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_NseIfrk4Step(benchmark::State& state) {
  const auto s = make_solver(static_cast<int>(state.range(0)));
  auto u = ns::random_field(s.grid(), 1, 1.0);
  for (auto _ : state) {
    u = ddalab::ifrk4_step(s, u, 0.01);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_NseIfrk4Step)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_NseContractionFactor(benchmark::State& state) {
  ns::BoundsInput in;
  in.nu = 0.5;
  in.forcing_norm = 0.05;
  in.lambda = 3.0;
  in.R = 0.01;
  const auto b = ns::bounds(in);
  for (auto _ : state) benchmark::DoNotOptimize(ns::contraction_M_nse(b, 0.5));
}
BENCHMARK(BM_NseContractionFactor);

}  // namespace

BENCHMARK_MAIN();
