#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "meissner/constants.hpp"
#include "meissner/error.hpp"
#include "meissner/validation.hpp"

using namespace meissner;
using namespace meissner::validation;
using constants::hbar;
using constants::pi;
using cplx = std::complex<double>;

namespace {

const CylinderGeometry reference(0.01, 1e-4);

AnnulusMesh small_mesh(const CylinderGeometry& geom) {
  auto m = AnnulusMesh::with_defaults(geom);
  m.n_r = 200;
  return m;
}

WaveGrid packet_grid() {
  WaveGrid g;
  g.x_min = -2.5e-5;
  g.x_max = 2.5e-5;
  g.n_points = 1u << 12;
  g.dt = 1e-5;
  return g;
}

// Free Gaussian, minimum uncertainty, written out independently of the library.
cplx free_gaussian(double x, double t, double sigma, double mass) {
  const cplx spread(1.0, hbar * t / (2 * mass * sigma * sigma));
  return std::pow(2 * pi * sigma * sigma, -0.25) / std::sqrt(spread) * std::exp(-x * x / (4 * sigma * sigma * spread));
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("meissner_test_" + name)).string();
}

}  // namespace

TEST_CASE("mesh validation") {
  auto m = AnnulusMesh::with_defaults(reference);
  CHECK_NOTHROW(m.validate());
  CHECK(m.r_outer >= 10 * reference.r0());
  CHECK(m.faces().size() == m.n_r + 1);
  CHECK(m.faces().front() == 0.0);
  CHECK(m.faces().back() == doctest::Approx(m.r_outer));
  // The surface is a face.
  const auto f = m.faces();
  CHECK(f[m.interior_cells()] == doctest::Approx(reference.r0()).epsilon(1e-14));

  auto bad = m;
  bad.r_outer = 5 * reference.r0();
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = m;
  bad.n_r = 100;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = m;
  bad.n_theta = 129;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = m;
  bad.n_theta = 64;
  CHECK_THROWS_AS(numeric_relax_solver(bad, {1e-5, 0}), DomainError);

  const auto r = m.refined();
  CHECK(r.n_r == 2 * m.n_r);
  CHECK(r.n_theta == 2 * m.n_theta);
  const auto fr = r.faces();
  for (std::size_t i = 0; i < f.size(); i += 37) CHECK(fr[2 * i] == doctest::Approx(f[i]).epsilon(1e-13));
}

TEST_CASE("relaxation with zero background is identically zero") {
  const auto sol = numeric_relax_solver(small_mesh(reference), {0, 0});
  for (double v : sol.a) CHECK(v == 0.0);
}

TEST_CASE("relaxation matches the screened cylinder and converges at second order") {
  const BackgroundField b0{5e-5, 5e-5};
  const auto exact = [&](FieldPoint p) { return field_at(reference, b0, p); };
  const auto mesh = small_mesh(reference);
  const auto coarse = compare_relax(numeric_relax_solver(mesh, b0), reference, exact);
  const auto fine = compare_relax(numeric_relax_solver(mesh.refined(), b0), reference, exact);
  CHECK(coarse.points > 0);
  CHECK(coarse.max_error < 1e-2);
  CHECK(fine.max_error < 1e-3);
  CHECK(coarse.max_error / fine.max_error == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("a very deep London layer barely perturbs the field") {
  const auto geom = CylinderGeometry::unchecked_depth(0.01, 10.0);
  const BackgroundField b0{2e-5, -1e-5};
  auto mesh = AnnulusMesh::with_defaults(geom);
  mesh.n_r = 200;
  const auto sol = numeric_relax_solver(mesh, b0);
  const auto uniform = compare_relax(sol, geom, [&](FieldPoint) { return FieldVector{b0.b0x, b0.b0y}; });
  CHECK(uniform.max_error < 1e-4);
  // Inside as well.
  for (std::size_t j = 0; j < sol.theta.size(); j += 16) {
    const auto f = sol.field(sol.n_interior / 2, j);
    CHECK(std::abs(f.bx - b0.b0x) < 1e-4 * b0.magnitude());
    CHECK(std::abs(f.by - b0.b0y) < 1e-4 * b0.magnitude());
  }
}

TEST_CASE("relaxation reports non-convergence") {
  RelaxOptions opts;
  opts.max_sweeps = 5;
  opts.check_every = 1;
  try {
    (void)numeric_relax_solver(small_mesh(reference), {5e-5, 0}, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.final_residual() > opts.tolerance);
  }
}

TEST_CASE("serial and parallel relaxation agree exactly") {
  RelaxOptions serial;
  serial.parallel = false;
  const auto a = numeric_relax_solver(small_mesh(reference), {3e-5, 4e-5}, serial);
  const auto b = numeric_relax_solver(small_mesh(reference), {3e-5, 4e-5});
  CHECK(a.sweeps == b.sweeps);
  CHECK(a.a == b.a);
}

TEST_CASE("split-step free spreading") {
  auto grid = packet_grid();
  const double sigma = 1e-6;
  grid.mass = constants::rb87_mass;
  // sigma(t) = 2 sigma
  const double t = 2 * std::sqrt(3.0) * grid.mass * sigma * sigma / hbar;
  const auto psi0 = sample([&](double x) { return free_gaussian(x, 0, sigma, grid.mass); }, grid);
  const auto psi = split_step_evolve(psi0, 0.0, grid, t);
  const double peak = std::abs(free_gaussian(0, t, sigma, grid.mass));
  double dev = 0;
  for (std::size_t i = 0; i < grid.n_points; ++i)
    dev = std::max(dev, std::abs(psi[i] - free_gaussian(grid.x(i), t, sigma, grid.mass)));
  CHECK(dev < 1e-8 * peak);
  CHECK(std::norm(psi[grid.n_points / 2]) == doctest::Approx(1 / (std::sqrt(2 * pi) * 2 * sigma)).epsilon(1e-8));
  CHECK(norm_squared(psi, grid) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("split-step error is second order in dt") {
  const double accel = 0.029, t = 1e-3;
  const auto p = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, accel);
  auto grid = packet_grid();
  const auto psi0 = sample([&](double x) { return gaussian_packet_canonical(x, 0, p); }, grid);
  const auto error = [&](double dt) {
    grid.dt = dt;
    const auto psi = split_step_evolve(psi0, accel, grid, t);
    double e = 0;
    for (std::size_t i = 0; i < grid.n_points; ++i)
      e = std::max(e, std::abs(psi[i] - gaussian_packet_canonical(grid.x(i), t, p)));
    return e;
  };
  const double e1 = error(2e-4);
  const double e2 = error(1e-4);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("split-step preconditions and truncation") {
  auto grid = packet_grid();
  const auto p = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, 0.0);
  auto psi0 = sample([&](double x) { return gaussian_packet_canonical(x, 0, p); }, grid);
  CHECK(norm_squared(psi0, grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(edge_probability(psi0, grid) < 1e-100);

  auto scaled = psi0;
  for (auto& v : scaled) v *= 1.001;
  CHECK_THROWS_AS(split_step_evolve(scaled, 0.0, grid, 1e-4), DomainError);
  CHECK_THROWS_AS(split_step_evolve(psi0, 0.0, grid, -1e-4), DomainError);
  WaveFunction short_psi(psi0.begin(), psi0.end() - 1);
  CHECK_THROWS(split_step_evolve(short_psi, 0.0, grid, 1e-4));

  // Falls 2 cm in 1 ms: out of a 50 um box.
  CHECK_THROWS_AS(split_step_evolve(psi0, 4e4, grid, 1e-3), TruncationError);
  // Spreads past the edges.
  CHECK_THROWS_AS(split_step_evolve(psi0, 0.0, grid, 0.1), TruncationError);

  WaveGrid bad = grid;
  bad.n_points = 1000;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = grid;
  bad.dt = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("serial and parallel split-step agree exactly") {
  auto grid = packet_grid();
  const auto p = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, 0.029);
  const auto psi0 = sample([&](double x) { return gaussian_packet_canonical(x, 0, p); }, grid);
  CHECK(split_step_evolve(psi0, 0.029, grid, 5e-4, false) == split_step_evolve(psi0, 0.029, grid, 5e-4, true));
}

TEST_CASE("interferometer overlap") {
  InterferometerScenario s;
  s.k = 8.0553e6;
  s.accel = 0.0;
  s.t_sep = 3e-3;
  const auto g0 = interferometer_grid(s, 1u << 13);
  const auto flat = numeric_interferometer(s, g0);
  CHECK(std::abs(flat - 1.0) < 1e-8);

  s.accel = 0.05;
  const auto grid = interferometer_grid(s, 1u << 13);
  const auto o1 = numeric_interferometer(s, grid);
  CHECK(std::abs(o1) == doctest::Approx(1.0).epsilon(1e-8));
  const double expected = 2 * s.k * s.accel * s.t_sep * s.t_sep;
  CHECK(std::abs(std::remainder(std::arg(o1) - expected, 2 * pi)) < 1e-4);

  // sqrt(2) t doubles the phase.
  auto longer = s;
  longer.t_sep *= std::sqrt(2.0);
  const auto o2 = numeric_interferometer(longer, interferometer_grid(longer, 1u << 13));
  CHECK(std::abs(std::remainder(std::arg(o2) - 2 * expected, 2 * pi)) < 1e-4);

  // Too few points to carry the 2 hbar k momentum.
  CHECK_THROWS_AS(interferometer_grid(s, 1u << 6), DomainError);
}

TEST_CASE("projection on the beam axis") {
  InterferometerConfig cfg;
  cfg.pulses.kx = 3e6;
  cfg.pulses.ky = 4e6;
  cfg.pulses.t_sep = 1e-3;
  const auto s = project_on_beam(cfg, {0.02, 0.01});
  CHECK(s.k == doctest::Approx(5e6));
  CHECK(s.accel == doctest::Approx((3 * 0.02 + 4 * 0.01) / 5.0));
  CHECK(s.t_sep == 1e-3);
}

TEST_CASE("finite differences") {
  const auto uniform = [](FieldPoint) { return FieldVector{2e-5, -3e-5}; };
  const auto j = finite_difference_jacobian(uniform, {0.02, 0.01}, 1e-5);
  for (const auto& row : j)
    for (double v : row) CHECK(v == 0.0);

  // A linear field is differentiated exactly.
  const auto linear = [](FieldPoint p) { return FieldVector{3 * p.x - 2 * p.y, 5 * p.y}; };
  const auto jl = finite_difference_jacobian(linear, {0.1, -0.2}, 1e-3);
  CHECK(jl[0][0] == doctest::Approx(3));
  CHECK(jl[0][1] == doctest::Approx(-2));
  CHECK(jl[1][0] == doctest::Approx(0).epsilon(1e-9));
  CHECK(jl[1][1] == doctest::Approx(5));
  CHECK(finite_difference_divergence(linear, {0.1, 0.2}, 1e-3) == doctest::Approx(8));
  CHECK(finite_difference_curl(linear, {0.1, 0.2}, 1e-3) == doctest::Approx(2));

  // Stencil crossing the surface.
  CHECK_THROWS_AS(finite_difference_jacobian(uniform, {0.01 + 5e-6, 0}, 1e-5, reference), DomainError);
  CHECK_NOTHROW(finite_difference_jacobian(uniform, {0.01 + 5e-5, 0}, 1e-5, reference));

  // Second-order truncation: the error against the analytic derivative drops 4x.
  const auto wave = [](FieldPoint p) { return FieldVector{std::sin(3 * p.x) * std::cos(p.y), std::exp(p.x * p.y)}; };
  const FieldPoint at{0.4, 0.7};
  const double exact = 3 * std::cos(3 * at.x) * std::cos(at.y);
  const double e1 = std::abs(finite_difference_jacobian(wave, at, 1e-2)[0][0] - exact);
  const double e2 = std::abs(finite_difference_jacobian(wave, at, 5e-3)[0][0] - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.01));

  const auto harmonic = [](FieldPoint p) { return p.x * p.x - p.y * p.y + 3 * p.x * p.y; };
  CHECK(std::abs(finite_difference_laplacian(harmonic, {0.3, 0.1}, 1e-3)) < 1e-6);
  const auto bowl = [](FieldPoint p) { return p.x * p.x + p.y * p.y; };
  CHECK(finite_difference_laplacian(bowl, {0.3, 0.1}, 1e-3) == doctest::Approx(4.0));
}

TEST_CASE("csv dumps") {
  const auto sol = numeric_relax_solver(small_mesh(reference), {5e-5, 0});
  const auto relax_path = temp_path("relax.csv");
  write_relax_csv(relax_path, sol);
  std::ifstream in(relax_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "r,theta,Az");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == sol.a.size());
  std::filesystem::remove(relax_path);

  const auto grid = packet_grid();
  const auto p = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, 0.0);
  const auto psi = sample([&](double x) { return gaussian_packet_canonical(x, 0, p); }, grid);
  const auto wave_path = temp_path("wave.csv");
  write_wave_csv(wave_path, psi, grid);
  std::ifstream win(wave_path);
  std::getline(win, header);
  CHECK(header == "x,re_psi,im_psi");
  std::filesystem::remove(wave_path);

  CHECK_THROWS(write_wave_csv("/nonexistent-dir/wave.csv", psi, grid));
}
