#include "meissner/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace meissner::kernels {
namespace {

FieldSample sample_one(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  return {p, field_at(geom, b0, p), region_of(geom, p)};
}

// Thomas back-substitution for theta line j into `work`; the forward sweep
// uses the factors precomputed in LineOperator::factor().
void solve_line(const LineOperator& op, std::span<const double> rhs, std::span<const double> u, std::size_t j,
                double* work) {
  const std::size_t n = op.n_r;
  const std::size_t nt = op.n_theta;
  const double* below = u.data() + ((j + nt - 1) % nt) * n;
  const double* above = u.data() + ((j + 1) % nt) * n;
  const double* f = rhs.data() + j * n;
  double carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = f[i] - op.theta[i] * (below[i] + above[i]);
    carry = (b - op.west[i] * carry) * op.inv_pivot[i];
    work[i] = carry;
  }
  for (std::size_t i = n - 1; i-- > 0;) work[i] -= op.upper[i] * work[i + 1];
}

double relax_line(const LineOperator& op, std::span<const double> rhs, std::span<double> u, std::size_t j,
                  double omega, double* work) {
  solve_line(op, rhs, u, j, work);
  double* line = u.data() + j * op.n_r;
  double delta = 0.0;
  for (std::size_t i = 0; i < op.n_r; ++i) {
    const double step = omega * (work[i] - line[i]);
    line[i] += step;
    delta = std::max(delta, std::abs(step));
  }
  return delta;
}

double cell_residual(const LineOperator& op, std::span<const double> rhs, std::span<const double> u, std::size_t i,
                     std::size_t j) {
  const std::size_t n = op.n_r;
  const std::size_t nt = op.n_theta;
  const double* line = u.data() + j * n;
  const double west = i > 0 ? line[i - 1] : 0.0;
  const double east = i + 1 < n ? line[i + 1] : 0.0;
  const double around = u[((j + nt - 1) % nt) * n + i] + u[((j + 1) % nt) * n + i];
  const double lhs = op.west[i] * west + op.east[i] * east + op.theta[i] * around + op.diag[i] * line[i];
  return std::abs((lhs - rhs[j * n + i]) / op.diag[i]);
}

}  // namespace

int max_threads() noexcept { return omp_get_max_threads(); }

void set_threads(int n) noexcept {
  if (n > 0) omp_set_num_threads(n);
}

void sample_field_serial(const CylinderGeometry& geom, BackgroundField b0, const FieldMapGrid& grid,
                         std::span<FieldSample> out) {
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix) out[iy * grid.nx + ix] = sample_one(geom, b0, grid.point(ix, iy));
}

void sample_field_parallel(const CylinderGeometry& geom, BackgroundField b0, const FieldMapGrid& grid,
                           std::span<FieldSample> out) {
  const auto total = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    out[idx] = sample_one(geom, b0, grid.point(idx % grid.nx, idx / grid.nx));
  }
}

void LineOperator::factor() {
  inv_pivot.assign(n_r, 0.0);
  upper.assign(n_r, 0.0);
  double prev_upper = 0.0;
  for (std::size_t i = 0; i < n_r; ++i) {
    const double pivot = diag[i] - west[i] * prev_upper;
    inv_pivot[i] = 1.0 / pivot;
    upper[i] = east[i] * inv_pivot[i];
    prev_upper = upper[i];
  }
}

double relax_sweep_serial(const LineOperator& op, std::span<const double> rhs, std::span<double> u, double omega) {
  std::vector<double> work(op.n_r);
  double delta = 0.0;
  for (std::size_t colour = 0; colour < 2; ++colour)
    for (std::size_t j = colour; j < op.n_theta; j += 2)
      delta = std::max(delta, relax_line(op, rhs, u, j, omega, work.data()));
  return delta;
}

double relax_sweep_parallel(const LineOperator& op, std::span<const double> rhs, std::span<double> u,
                            double omega) {
  double delta = 0.0;
  const auto half = static_cast<std::int64_t>(op.n_theta / 2);
#pragma omp parallel reduction(max : delta)
  {
    std::vector<double> work(op.n_r);
    for (std::size_t colour = 0; colour < 2; ++colour) {
#pragma omp for schedule(static)
      for (std::int64_t k = 0; k < half; ++k) {
        const auto j = 2 * static_cast<std::size_t>(k) + colour;
        delta = std::max(delta, relax_line(op, rhs, u, j, omega, work.data()));
      }
    }
  }
  return delta;
}

double residual_serial(const LineOperator& op, std::span<const double> rhs, std::span<const double> u) {
  double worst = 0.0;
  for (std::size_t j = 0; j < op.n_theta; ++j)
    for (std::size_t i = 0; i < op.n_r; ++i) worst = std::max(worst, cell_residual(op, rhs, u, i, j));
  return worst;
}

double residual_parallel(const LineOperator& op, std::span<const double> rhs, std::span<const double> u) {
  double worst = 0.0;
  const auto nt = static_cast<std::int64_t>(op.n_theta);
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t jj = 0; jj < nt; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    for (std::size_t i = 0; i < op.n_r; ++i) worst = std::max(worst, cell_residual(op, rhs, u, i, j));
  }
  return worst;
}

void multiply_serial(std::span<std::complex<double>> psi, std::span<const std::complex<double>> phase) {
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= phase[i];
}

void multiply_parallel(std::span<std::complex<double>> psi, std::span<const std::complex<double>> phase) {
  const auto n = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) psi[static_cast<std::size_t>(k)] *= phase[static_cast<std::size_t>(k)];
}

}  // namespace meissner::kernels
