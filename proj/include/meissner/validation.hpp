#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meissner/atom.hpp"
#include "meissner/field.hpp"
#include "meissner/linearized.hpp"

// Numerical oracles for the closed forms. None of these call the closed-form
// field, wave-packet or phase routines; they only see the far-field data,
// the PDEs and the pulse sequence.

namespace meissner::validation {

// ---------------------------------------------------------------------------
// Polar relaxation solver for A_z
// ---------------------------------------------------------------------------

/// Polar finite-volume mesh on 0 <= r <= r_outer. Radial faces follow
/// r = R0 + w sinh(s) with w = min(lambda, R0), uniform in s on each side of
/// the surface, so cells are ~w ds wide at r = R0 and grow geometrically
/// away from it. The surface is always a cell face.
struct AnnulusMesh {
  CylinderGeometry geometry;
  double r_outer = 0.0;
  std::size_t n_r = 400;
  std::size_t n_theta = 128;
  std::size_t n_r_interior = 0;  // cells inside the cylinder; 0 picks equal s-spacing

  static AnnulusMesh with_defaults(const CylinderGeometry& geom);
  /// Throws DomainError unless r_outer >= 10 R0, n_r >= 200, n_theta >= 128
  /// and n_theta is even.
  void validate() const;
  /// Both dimensions doubled (every coarse face is also a fine face).
  AnnulusMesh refined() const;
  std::size_t interior_cells() const;
  /// Radial faces, n_r + 1 of them, from the axis to r_outer.
  std::vector<double> faces() const;
  /// Cell centres (the mapping evaluated at mid-cell in s).
  std::vector<double> centres() const;
};

struct RelaxOptions {
  double tolerance = 1e-10;   // scaled residual, relative to |B0| R0
  std::size_t max_sweeps = 200000;
  std::size_t check_every = 10;
  bool parallel = true;
};

/// A_z on the mesh, stored theta-major: a[j * n_r + i] at (r[i], theta[j]).
struct RelaxSolution {
  std::vector<double> r;        // cell-centre radii
  std::vector<double> faces;    // n_r + 1 radial faces
  std::vector<double> theta;    // j * dtheta
  std::size_t n_interior = 0;   // cells with r < R0
  std::vector<double> a;        // total A_z
  std::vector<double> perturbation;  // A_z minus the uniform-field potential
  BackgroundField b0;
  double omega = 1.0;
  std::size_t sweeps = 0;
  double residual = 0.0;

  double at(std::size_t i, std::size_t j) const { return a[j * r.size() + i]; }
  /// Field at cell centre (i, j) from central differences of A_z; requires
  /// 0 < i < n_r - 1.
  FieldVector field(std::size_t i, std::size_t j) const;
};

/// Solves lap A = 0 (r > R0) and lap A = A / lambda^2 (r < R0) with
/// A = r (B0x sin(theta) - B0y cos(theta)) imposed at r_outer. Continuity of
/// A and dA/dr across the surface is built into the conservative
/// discretization. Throws ConvergenceError after max_sweeps.
RelaxSolution numeric_relax_solver(const AnnulusMesh& mesh, BackgroundField b0, const RelaxOptions& opts = {});

struct RelaxComparison {
  double max_error = 0.0;   // L-inf |B_num - B_exact| / |B0| over the band
  double r_at_max = 0.0;
  double theta_at_max = 0.0;
  std::size_t points = 0;
};

/// Compares against any exact field over the exterior band
/// R0 < r <= band_fraction * r_outer, skipping the first exterior cell whose
/// stencil straddles the surface.
RelaxComparison compare_relax(const RelaxSolution& sol, const CylinderGeometry& geom,
                              const std::function<FieldVector(FieldPoint)>& exact, double band_fraction = 0.8);

// ---------------------------------------------------------------------------
// Split-step propagation and the interferometer overlap
// ---------------------------------------------------------------------------

/// Periodic 1-D grid: x_i = x_min + i (x_max - x_min) / n_points.
struct WaveGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_points = 1 << 14;
  double dt = 1e-5;
  double mass = constants::rb87_mass;

  /// Throws DomainError unless n_points is a power of two (>= 16), the
  /// bounds are ordered and dt, mass > 0.
  void validate() const;
  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_points); }
  double x(std::size_t i) const noexcept { return x_min + static_cast<double>(i) * dx(); }
  /// Largest per-step potential phase |m a x dt / hbar| on this grid.
  double potential_phase_per_step(double accel) const noexcept;
};

using WaveFunction = std::vector<std::complex<double>>;

/// Fraction of probability allowed in the outer 5% of the grid.
inline constexpr double escape_threshold = 1e-6;

double norm_squared(const WaveFunction& psi, const WaveGrid& grid);
std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b, const WaveGrid& grid);
/// Probability in the outer 5% (2.5% on each side) of the grid.
double edge_probability(const WaveFunction& psi, const WaveGrid& grid);

/// Samples any callable psi(x) on the grid.
WaveFunction sample(const std::function<std::complex<double>(double)>& psi, const WaveGrid& grid);

/// Strang splitting for H = p^2 / 2m + m accel x: half potential step, FFT
/// kinetic step, half potential step. The step count is ceil(t / dt) with
/// the step shrunk to land on t. Requires |psi0| normalized to 1e-10
/// (DomainError otherwise); throws TruncationError when the final state has
/// >= escape_threshold probability in the outer 5% of the grid.
WaveFunction split_step_evolve(const WaveFunction& psi0, double accel, const WaveGrid& grid, double t,
                               bool parallel = true);

/// One-axis interferometer: wave number along the beam axis, acceleration
/// projected on it, pulse separation, atom mass and initial packet width.
struct InterferometerScenario {
  double k = 0.0;        // rad/m
  double accel = 0.0;    // m/s^2
  double t_sep = 0.0;    // s
  double mass = constants::rb87_mass;
  double sigma_x = 2e-6;  // m
};

/// Full interferometer configuration; projected onto the laser axis.
struct InterferometerConfig {
  AtomParams atom;
  PulseSequence pulses;
  AnchorPoint anchor;
  double sigma_x = 2e-6;
};

InterferometerScenario project_on_beam(const InterferometerConfig& cfg, HorizontalAcceleration g);

/// A grid that holds both arms, the packet spreading and the fall for the
/// scenario, with dt chosen so the per-step potential phase stays below pi/8.
WaveGrid interferometer_grid(const InterferometerScenario& s, std::size_t n_points = 1 << 14);

/// <psi1|psi2> for
///   |psi1> = U K- U K+ |psi0>,   |psi2> = K- U K+ U |psi0>,
/// with K+- = exp(+-2ikx) and U(t_sep) from split_step_evolve, psi0 a
/// minimum-uncertainty Gaussian at the origin.
std::complex<double> numeric_interferometer(const InterferometerScenario& s, const WaveGrid& grid);

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

using Jacobian = std::array<std::array<double, 2>, 2>;  // [component][direction]
using VectorFieldFn = std::function<FieldVector(FieldPoint)>;
using ScalarFieldFn = std::function<double(FieldPoint)>;

/// Central differences d(Bx, By)/d(x, y), O(h^2). With `surface` given,
/// throws DomainError if the four stencil points are not all on the same
/// side of r = surface->r0() as p.
Jacobian finite_difference_jacobian(const VectorFieldFn& fn, FieldPoint p, double h,
                                    const std::optional<CylinderGeometry>& surface = std::nullopt);

/// Five-point Laplacian.
double finite_difference_laplacian(const ScalarFieldFn& fn, FieldPoint p, double h);
/// Five-point Laplacian of each Cartesian component.
FieldVector finite_difference_laplacian(const VectorFieldFn& fn, FieldPoint p, double h);
double finite_difference_divergence(const VectorFieldFn& fn, FieldPoint p, double h);
double finite_difference_curl(const VectorFieldFn& fn, FieldPoint p, double h);

// ---------------------------------------------------------------------------
// CSV dumps for offline inspection
// ---------------------------------------------------------------------------

/// Columns r,theta,Az.
void write_relax_csv(const std::string& path, const RelaxSolution& sol);
/// Columns x,re_psi,im_psi.
void write_wave_csv(const std::string& path, const WaveFunction& psi, const WaveGrid& grid);

}  // namespace meissner::validation
