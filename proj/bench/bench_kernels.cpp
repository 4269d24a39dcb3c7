// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dopt/kernels/agent_stage.hpp"
#include "dopt/kernels/barrier.hpp"
#include "dopt/kernels/mincut.hpp"
#include "dopt/lmi.hpp"
#include "dopt/scenario.hpp"

using namespace dopt;

namespace {

Matrix random_weights(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng) < 0.4 ? u(rng) : 0.0;
  return w;
}

template <kernels::SubsetCut (*Fn)(const Matrix&)>
void BM_MinCut(benchmark::State& state) {
  const Matrix w = random_weights(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(w));
}
BENCHMARK(BM_MinCut<kernels::min_cut_serial>)->Name("mincut/serial")->Arg(12)->Arg(16)->Arg(18);
BENCHMARK(BM_MinCut<kernels::min_cut_parallel>)->Name("mincut/parallel")->Arg(12)->Arg(16)->Arg(18);

struct BarrierInput {
  Matrix s_inv;
  std::vector<Matrix> g;
  std::vector<int> index;
};

BarrierInput barrier_input(int n, int m) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto rnd = [&] {
    Matrix a(n, n);
    for (int i = 0; i < n * n; ++i) a(i / n, i % n) = nd(rng);
    return a;
  };
  BarrierInput in;
  const Matrix a = rnd();
  in.s_inv = (a * a.transpose() + Matrix::Identity(n, n)).inverse();
  for (int k = 0; k < m; ++k) {
    in.g.push_back(sym(rnd()));
    in.index.push_back(k);
  }
  return in;
}

template <bool Parallel>
void BM_Barrier(benchmark::State& state) {
  // Block size of Pi for the bundled example (28) and one decision matrix set.
  const int m = static_cast<int>(state.range(0));
  const BarrierInput in = barrier_input(28, m);
  Vector grad = Vector::Zero(m);
  Matrix hess = Matrix::Zero(m, m);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::accumulate_barrier_parallel(in.s_inv, in.g, in.index, grad, hess);
    } else {
      kernels::accumulate_barrier_serial(in.s_inv, in.g, in.index, grad, hess);
    }
    benchmark::DoNotOptimize(hess.data());
  }
}
BENCHMARK(BM_Barrier<false>)->Name("barrier/serial")->Arg(42)->Arg(84);
BENCHMARK(BM_Barrier<true>)->Name("barrier/parallel")->Arg(42)->Arg(84);

template <bool Parallel>
void BM_AgentStage(benchmark::State& state) {
  const Scenario sc = demo_scenario(0.4);
  const StateLayout layout(sc.agents);
  const Matrix adj = demo_mode_adjacency(2);
  Vector x = Vector::Zero(layout.dim);
  for (int i = 0; i < sc.num_agents(); ++i) x.segment(layout.x_offset[i], layout.n[i]) = sc.x0[i];
  const std::vector<Vector> delayed(sc.num_agents(), x);
  const kernels::StageInput in{sc, layout, adj, x, delayed};
  Vector deriv(layout.dim);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::stage_rates_parallel(in, deriv, nullptr);
    } else {
      kernels::stage_rates_serial(in, deriv, nullptr);
    }
    benchmark::DoNotOptimize(deriv.data());
  }
}
BENCHMARK(BM_AgentStage<false>)->Name("agent_stage/serial");
BENCHMARK(BM_AgentStage<true>)->Name("agent_stage/parallel");

void BM_Integrate(benchmark::State& state) {
  Scenario sc = demo_scenario(0.4);
  sc.sim.horizon = 1.0;
  sc.sim.policy = state.range(0) ? ExecPolicy::kParallel : ExecPolicy::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sc));
}
BENCHMARK(BM_Integrate)->Name("integrate_1s")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Feasibility(benchmark::State& state) {
  const LmiData data = make_lmi_data(demo_scenario(0.1), 0.4, 0.0);
  LmiOptions opt;
  opt.search_kappa = false;
  opt.kappa = 4.0;
  opt.solver.policy = state.range(0) ? ExecPolicy::kParallel : ExecPolicy::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(data, LmiVariant::kTheorem1, opt));
}
BENCHMARK(BM_Feasibility)->Name("lmi_single_kappa")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
