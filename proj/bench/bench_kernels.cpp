#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "meissner/kernels.hpp"
#include "meissner/validation.hpp"

using namespace meissner;

namespace {

const CylinderGeometry geom(0.01, 1e-4);
const BackgroundField b0{5e-5, 5e-5};

template <bool Parallel>
void field_map_sampling(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FieldMapGrid grid{-0.03, 0.03, -0.03, 0.03, n, n};
  std::vector<FieldSample> out(grid.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::sample_field_parallel(geom, b0, grid, out);
    else
      kernels::sample_field_serial(geom, b0, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

// A Laplacian-like operator on an n_r x n_theta polar mesh.
kernels::LineOperator polar_operator(std::size_t n_r, std::size_t n_theta) {
  kernels::LineOperator op;
  op.n_r = n_r;
  op.n_theta = n_theta;
  op.west.resize(n_r);
  op.east.resize(n_r);
  op.theta.resize(n_r);
  op.diag.resize(n_r);
  for (std::size_t i = 0; i < n_r; ++i) {
    const double r = 1.0 + static_cast<double>(i);
    op.west[i] = i == 0 ? 0.0 : r - 0.5;
    op.east[i] = r + 0.5;
    op.theta[i] = 1.0 / r;
    op.diag[i] = -(op.west[i] + op.east[i] + 2.0 * op.theta[i]);
  }
  op.factor();
  return op;
}

template <bool Parallel>
void relax_sweep(benchmark::State& state) {
  const auto n_r = static_cast<std::size_t>(state.range(0));
  const std::size_t n_theta = 256;
  const auto op = polar_operator(n_r, n_theta);
  std::vector<double> rhs(n_r * n_theta, 1.0), u(n_r * n_theta, 0.0);
  for (auto _ : state) {
    const double d = Parallel ? kernels::relax_sweep_parallel(op, rhs, u, 1.8)
                              : kernels::relax_sweep_serial(op, rhs, u, 1.8);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n_r * n_theta));
}

template <bool Parallel>
void split_step(benchmark::State& state) {
  validation::WaveGrid grid;
  grid.x_min = -2.5e-5;
  grid.x_max = 2.5e-5;
  grid.n_points = static_cast<std::size_t>(state.range(0));
  grid.dt = 1e-5;
  const auto p = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, 0.029);
  const auto psi0 =
      validation::sample([&](double x) { return gaussian_packet_canonical(x, 0.0, p); }, grid);
  for (auto _ : state) {
    auto psi = validation::split_step_evolve(psi0, p.accel, grid, 1e-3, Parallel);
    benchmark::DoNotOptimize(psi.data());
  }
}

}  // namespace

BENCHMARK(field_map_sampling<false>)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK(field_map_sampling<true>)->Arg(201)->Arg(801)->Unit(benchmark::kMillisecond);
BENCHMARK(relax_sweep<false>)->Arg(400)->Arg(800)->Unit(benchmark::kMicrosecond);
BENCHMARK(relax_sweep<true>)->Arg(400)->Arg(800)->Unit(benchmark::kMicrosecond);
BENCHMARK(split_step<false>)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK(split_step<true>)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
