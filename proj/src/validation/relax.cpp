#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "meissner/constants.hpp"
#include "meissner/error.hpp"
#include "meissner/kernels.hpp"
#include "meissner/validation.hpp"

namespace meissner::validation {
namespace {

struct Mapping {
  double r0;
  double width;  // w = min(lambda, R0)
  double s_in;   // s range below the surface
  double s_out;  // s range above it

  explicit Mapping(const AnnulusMesh& m)
      : r0(m.geometry.r0()),
        width(std::min(m.geometry.lambda(), m.geometry.r0())),
        s_in(std::asinh(r0 / width)),
        s_out(std::asinh((m.r_outer - r0) / width)) {}

  double radius(double s) const { return r0 + width * std::sinh(s); }
};

// Inverse iteration for the smallest sigma of L v = sigma D v, where L is the
// (positive) radial part of the line operator and D the diagonal theta
// coupling 2 C. Gives the line-Jacobi spectral radius cos(m dtheta)/(1 + sigma).
double smallest_generalized_eigenvalue(const kernels::LineOperator& op) {
  const std::size_t n = op.n_r;
  std::vector<double> lower(n), main(n), upper(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = 2.0 * op.theta[i];
    main[i] = -op.diag[i] - d[i];
    lower[i] = -op.west[i];
    upper[i] = -op.east[i];
  }
  // Factor L once.
  std::vector<double> inv_pivot(n), up(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inv_pivot[i] = 1.0 / (main[i] - lower[i] * prev);
    up[i] = upper[i] * inv_pivot[i];
    prev = up[i];
  }
  auto solve = [&](std::vector<double>& b) {
    double carry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      carry = (b[i] - lower[i] * carry) * inv_pivot[i];
      b[i] = carry;
    }
    for (std::size_t i = n - 1; i-- > 0;) b[i] -= up[i] * b[i + 1];
  };
  std::vector<double> v(n, 1.0), y(n);
  double sigma = 0.0;
  for (int it = 0; it < 300; ++it) {
    for (std::size_t i = 0; i < n; ++i) y[i] = d[i] * v[i];
    solve(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += v[i] * d[i] * v[i];
      den += v[i] * d[i] * y[i];
    }
    const double next = num / den;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += y[i] * d[i] * y[i];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / norm;
    if (it > 10 && std::abs(next - sigma) <= 1e-12 * std::abs(next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

}  // namespace

AnnulusMesh AnnulusMesh::with_defaults(const CylinderGeometry& geom) {
  return AnnulusMesh{geom, 1000.0 * geom.r0(), 400, 128, 0};
}

void AnnulusMesh::validate() const {
  if (!(r_outer >= 10.0 * geometry.r0())) throw DomainError("mesh r_outer must be at least 10 R0");
  if (n_r < 200) throw DomainError("mesh needs n_r >= 200");
  if (n_theta < 128 || n_theta % 2 != 0) throw DomainError("mesh needs an even n_theta >= 128");
  const auto n_in = interior_cells();
  if (n_in < 8 || n_in + 8 > n_r) throw DomainError("mesh needs at least 8 cells on each side of the surface");
}

std::size_t AnnulusMesh::interior_cells() const {
  if (n_r_interior != 0) return n_r_interior;
  const Mapping map(*this);
  const double frac = map.s_in / (map.s_in + map.s_out);
  return std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(frac * static_cast<double>(n_r))));
}

AnnulusMesh AnnulusMesh::refined() const {
  AnnulusMesh fine = *this;
  fine.n_r = 2 * n_r;
  fine.n_theta = 2 * n_theta;
  fine.n_r_interior = 2 * interior_cells();
  return fine;
}

std::vector<double> AnnulusMesh::faces() const {
  const Mapping map(*this);
  const std::size_t n_in = interior_cells();
  const std::size_t n_out = n_r - n_in;
  std::vector<double> f(n_r + 1);
  const double ds_in = map.s_in / static_cast<double>(n_in);
  const double ds_out = map.s_out / static_cast<double>(n_out);
  for (std::size_t k = 0; k <= n_in; ++k) f[k] = map.radius(-map.s_in + static_cast<double>(k) * ds_in);
  for (std::size_t k = 1; k <= n_out; ++k) f[n_in + k] = map.radius(static_cast<double>(k) * ds_out);
  f[0] = 0.0;
  f[n_in] = map.r0;
  f[n_r] = r_outer;
  return f;
}

std::vector<double> AnnulusMesh::centres() const {
  const Mapping map(*this);
  const std::size_t n_in = interior_cells();
  const std::size_t n_out = n_r - n_in;
  std::vector<double> c(n_r);
  const double ds_in = map.s_in / static_cast<double>(n_in);
  const double ds_out = map.s_out / static_cast<double>(n_out);
  for (std::size_t k = 0; k < n_in; ++k) c[k] = map.radius(-map.s_in + (static_cast<double>(k) + 0.5) * ds_in);
  for (std::size_t k = 0; k < n_out; ++k) c[n_in + k] = map.radius((static_cast<double>(k) + 0.5) * ds_out);
  return c;
}

RelaxSolution numeric_relax_solver(const AnnulusMesh& mesh, BackgroundField b0, const RelaxOptions& opts) {
  mesh.validate();
  const std::size_t n = mesh.n_r;
  const std::size_t nt = mesh.n_theta;
  const std::size_t n_in = mesh.interior_cells();
  const double dtheta = 2.0 * constants::pi / static_cast<double>(nt);
  const double kappa2 = 1.0 / (mesh.geometry.lambda() * mesh.geometry.lambda());

  RelaxSolution sol;
  sol.faces = mesh.faces();
  sol.r = mesh.centres();
  sol.n_interior = n_in;
  sol.b0 = b0;
  sol.theta.resize(nt);
  for (std::size_t j = 0; j < nt; ++j) sol.theta[j] = static_cast<double>(j) * dtheta;

  const auto& f = sol.faces;
  const auto& r = sol.r;
  kernels::LineOperator op;
  op.n_r = n;
  op.n_theta = nt;
  op.west.assign(n, 0.0);
  op.east.assign(n, 0.0);
  op.theta.assign(n, 0.0);
  op.diag.assign(n, 0.0);
  std::vector<double> reaction(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double west = i > 0 ? f[i] / (r[i] - r[i - 1]) : 0.0;
    const double east = i + 1 < n ? f[i + 1] / (r[i + 1] - r[i]) : f[n] / (f[n] - r[n - 1]);
    const double volume = 0.5 * (f[i + 1] * f[i + 1] - f[i] * f[i]);
    reaction[i] = i < n_in ? kappa2 * volume : 0.0;
    op.west[i] = west;
    op.east[i] = i + 1 < n ? east : 0.0;  // outer Dirichlet value is zero
    op.theta[i] = (f[i + 1] - f[i]) / (r[i] * dtheta * dtheta);
    op.diag[i] = -(west + east + 2.0 * op.theta[i] + reaction[i]);
  }
  op.factor();

  // Unknown: perturbation u = A - r S(theta). The uniform-field potential is
  // harmonic, so u is harmonic outside and sourced by the London term inside.
  std::vector<double> rhs(n * nt, 0.0);
  for (std::size_t j = 0; j < nt; ++j) {
    const double s = b0.b0x * std::sin(sol.theta[j]) - b0.b0y * std::cos(sol.theta[j]);
    for (std::size_t i = 0; i < n_in; ++i) rhs[j * n + i] = reaction[i] * r[i] * s;
  }

  const double sigma = smallest_generalized_eigenvalue(op);
  const double rho = std::cos(dtheta) / (1.0 + sigma);
  sol.omega = 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - rho * rho)));

  std::vector<double> u(n * nt, 0.0);
  const double scale = b0.magnitude() * mesh.geometry.r0();
  if (scale > 0.0) {
    const auto residual = [&] {
      return (opts.parallel ? kernels::residual_parallel(op, rhs, u) : kernels::residual_serial(op, rhs, u)) / scale;
    };
    double res = residual();
    std::size_t sweeps = 0;
    while (res > opts.tolerance) {
      if (sweeps >= opts.max_sweeps) {
        std::ostringstream msg;
        msg << "relaxation did not converge in " << sweeps << " sweeps (residual " << res << ")";
        throw ConvergenceError(msg.str(), res);
      }
      for (std::size_t k = 0; k < opts.check_every; ++k) {
        if (opts.parallel)
          kernels::relax_sweep_parallel(op, rhs, u, sol.omega);
        else
          kernels::relax_sweep_serial(op, rhs, u, sol.omega);
      }
      sweeps += opts.check_every;
      res = residual();
    }
    sol.sweeps = sweeps;
    sol.residual = res;
  }

  sol.perturbation = u;
  sol.a.resize(n * nt);
  for (std::size_t j = 0; j < nt; ++j) {
    const double s = b0.b0x * std::sin(sol.theta[j]) - b0.b0y * std::cos(sol.theta[j]);
    for (std::size_t i = 0; i < n; ++i) sol.a[j * n + i] = u[j * n + i] + r[i] * s;
  }
  return sol;
}

FieldVector RelaxSolution::field(std::size_t i, std::size_t j) const {
  const std::size_t n = r.size();
  const std::size_t nt = theta.size();
  if (i == 0 || i + 1 >= n) throw DomainError("field derivative needs interior radial neighbours");
  const double dtheta = 2.0 * constants::pi / static_cast<double>(nt);
  const auto u = [&](std::size_t ii, std::size_t jj) { return perturbation[(jj % nt) * n + ii]; };
  const double br = (u(i, j + 1) - u(i, j + nt - 1)) / (2.0 * dtheta * r[i]);
  const double hm = r[i] - r[i - 1];
  const double hp = r[i + 1] - r[i];
  const double dudr = (hm * hm * (u(i + 1, j) - u(i, j)) + hp * hp * (u(i, j) - u(i - 1, j))) / (hp * hm * (hp + hm));
  const FieldPoint p{r[i] * std::cos(theta[j]), r[i] * std::sin(theta[j])};
  return FieldVector{b0.b0x, b0.b0y} + to_cartesian(PolarField{br, -dudr}, p);
}

RelaxComparison compare_relax(const RelaxSolution& sol, const CylinderGeometry& geom,
                              const std::function<FieldVector(FieldPoint)>& exact, double band_fraction) {
  RelaxComparison cmp;
  const double norm = sol.b0.magnitude();
  if (norm == 0.0) return cmp;
  const double r_limit = band_fraction * sol.faces.back();
  for (std::size_t i = sol.n_interior + 1; i + 1 < sol.r.size() && sol.r[i] <= r_limit; ++i) {
    if (sol.r[i] <= geom.r0()) continue;
    for (std::size_t j = 0; j < sol.theta.size(); ++j) {
      const FieldPoint p{sol.r[i] * std::cos(sol.theta[j]), sol.r[i] * std::sin(sol.theta[j])};
      const double err = (sol.field(i, j) - exact(p)).magnitude() / norm;
      ++cmp.points;
      if (err > cmp.max_error) {
        cmp.max_error = err;
        cmp.r_at_max = sol.r[i];
        cmp.theta_at_max = sol.theta[j];
      }
    }
  }
  return cmp;
}

void write_relax_csv(const std::string& path, const RelaxSolution& sol) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "r,theta,Az\n" << std::setprecision(17);
  for (std::size_t j = 0; j < sol.theta.size(); ++j)
    for (std::size_t i = 0; i < sol.r.size(); ++i) out << sol.r[i] << ',' << sol.theta[j] << ',' << sol.at(i, j) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace meissner::validation
