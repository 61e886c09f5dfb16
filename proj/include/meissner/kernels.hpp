#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "meissner/field.hpp"

// Data-parallel inner loops. Every OpenMP kernel has a serial twin with the
// same arithmetic in the same order; tests require the two to agree bitwise
// and the benchmark target compares their throughput.

namespace meissner::kernels {

/// Number of threads the parallel kernels will use.
int max_threads() noexcept;
/// Overrides the OpenMP thread count; n <= 0 leaves it unchanged.
void set_threads(int n) noexcept;

void sample_field_serial(const CylinderGeometry& geom, BackgroundField b0, const FieldMapGrid& grid,
                         std::span<FieldSample> out);
void sample_field_parallel(const CylinderGeometry& geom, BackgroundField b0, const FieldMapGrid& grid,
                           std::span<FieldSample> out);

/// Radial tridiagonal operator shared by every theta line of a polar
/// finite-volume mesh, already factored for the Thomas algorithm.
///
/// Cell (i, j) satisfies
///   west[i] u(i-1,j) + east[i] u(i+1,j) + theta[i] (u(i,j-1) + u(i,j+1))
///     + diag[i] u(i,j) = rhs(i,j)
/// with u(-1,.) and u(n,.) treated as zero.
struct LineOperator {
  std::size_t n_r = 0;
  std::size_t n_theta = 0;
  std::vector<double> west;
  std::vector<double> east;
  std::vector<double> theta;
  std::vector<double> diag;

  /// Precomputes the Thomas factors; call after filling the coefficients.
  void factor();
  std::vector<double> inv_pivot;  // 1 / modified diagonal
  std::vector<double> upper;      // modified super-diagonal
};

/// One red-black line-SOR sweep over theta lines (even j, then odd j).
/// Storage is theta-major: u[j * n_r + i]. Returns max |u_new - u_old|.
double relax_sweep_serial(const LineOperator& op, std::span<const double> rhs, std::span<double> u, double omega);
double relax_sweep_parallel(const LineOperator& op, std::span<const double> rhs, std::span<double> u, double omega);

/// Scaled residual max_ij |(A u - rhs)_ij / diag_i|.
double residual_serial(const LineOperator& op, std::span<const double> rhs, std::span<const double> u);
double residual_parallel(const LineOperator& op, std::span<const double> rhs, std::span<const double> u);

/// psi[i] *= phase[i].
void multiply_serial(std::span<std::complex<double>> psi, std::span<const std::complex<double>> phase);
void multiply_parallel(std::span<std::complex<double>> psi, std::span<const std::complex<double>> phase);

}  // namespace meissner::kernels
