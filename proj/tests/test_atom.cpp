#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "meissner/atom.hpp"
#include "meissner/error.hpp"

using namespace meissner;
using constants::hbar;
using constants::pi;
using cplx = std::complex<double>;

namespace {

// Trapezoid moments of |psi|^2 on [-w, w].
struct Moments {
  double norm = 0, mean = 0, var = 0;
};

template <typename Fn>
Moments moments(Fn&& psi, double centre, double w, int n) {
  const double h = 2 * w / n;
  double s0 = 0, s1 = 0, s2 = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = centre - w + i * h;
    const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
    const double p = std::norm(psi(x)) * weight * h;
    s0 += p;
    s1 += p * x;
    s2 += p * x * x;
  }
  Moments m;
  m.norm = s0;
  m.mean = s1 / s0;
  m.var = s2 / s0 - m.mean * m.mean;
  return m;
}

const PacketParams rb = PacketParams::minimum_uncertainty(1e-6, constants::rb87_mass, 0.029);

}  // namespace

TEST_CASE("classical trajectory") {
  TrajectoryState s0;
  s0.position = {0.02, 0.02, 0.0};
  s0.velocity = {0.1, -0.2, 0.5};
  const AccelerationVector g{0.029, 0.0, 9.8};

  const auto at0 = classical_trajectory(s0, g, 0.0);
  CHECK(at0.position.x == s0.position.x);
  CHECK(at0.velocity.z == s0.velocity.z);

  TrajectoryState rest;
  CHECK(classical_trajectory(rest, g, 1.0).position.z == doctest::Approx(-4.9));

  // Two half steps equal one full step.
  const auto half = classical_trajectory(classical_trajectory(s0, g, 0.3), g, 0.3);
  const auto full = classical_trajectory(s0, g, 0.6);
  CHECK(half.position.x == doctest::Approx(full.position.x).epsilon(1e-14));
  CHECK(half.position.z == doctest::Approx(full.position.z).epsilon(1e-14));
  CHECK(half.velocity.y == doctest::Approx(full.velocity.y).epsilon(1e-14));

  CHECK_THROWS_AS(classical_trajectory(s0, g, -1e-3), DomainError);
}

TEST_CASE("packet at t = 0 is the minimum-uncertainty Gaussian") {
  const double s = rb.sigma_x;
  for (double x : {0.0, 0.5e-6, -1.3e-6, 3e-6}) {
    const double expected = std::pow(2 * pi * s * s, -0.25) * std::exp(-x * x / (4 * s * s));
    const cplx got = gaussian_packet_canonical(x, 0.0, rb);
    CHECK(got.real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(got.imag()) < 1e-14 * std::abs(expected) + 1e-300);
  }
}

TEST_CASE("packet stays normalized and follows the classical centroid") {
  for (double t : {0.0, 1e-3, 1e-2}) {
    const double w = packet_width(t, rb);
    const double c = packet_centroid(t, rb);
    const auto m = moments([&](double x) { return gaussian_packet_canonical(x, t, rb); }, c, 14 * w, 8000);
    CHECK(m.norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(m.mean - (-0.5 * rb.accel * t * t)) < 1e-8 * w);
    CHECK(std::sqrt(m.var) == doctest::Approx(w).epsilon(1e-8));
  }
}

TEST_CASE("free spreading of the peak density") {
  PacketParams free = rb;
  free.accel = 0.0;
  for (double t : {1e-4, 1e-3, 5e-3}) {
    const double s = free.sigma_x;
    const double st = s * std::sqrt(1 + std::pow(hbar * t / (2 * free.mass * s * s), 2));
    CHECK(packet_width(t, free) == doctest::Approx(st).epsilon(1e-12));
    CHECK(std::norm(gaussian_packet_canonical(0.0, t, free)) ==
          doctest::Approx(1.0 / (std::sqrt(2 * pi) * st)).epsilon(1e-12));
  }
}

TEST_CASE("packet solves the Schroedinger equation in the linear potential") {
  // i hbar dpsi/dt = -hbar^2/(2m) psi'' + m a x psi, checked by central differences
  const double t = 2e-3;
  const double w = packet_width(t, rb);
  const double dx = 1e-3 * w, dt = 1e-3 * t;
  const double c = packet_centroid(t, rb);
  for (double u : {-1.5, -0.4, 0.0, 0.7, 1.8}) {
    const double x = c + u * w;
    const auto psi = [&](double xx, double tt) { return gaussian_packet_canonical(xx, tt, rb); };
    const cplx lhs = cplx(0, hbar) * (psi(x, t + dt) - psi(x, t - dt)) / (2 * dt);
    const cplx lap = (psi(x + dx, t) - 2.0 * psi(x, t) + psi(x - dx, t)) / (dx * dx);
    const cplx rhs = -hbar * hbar / (2 * rb.mass) * lap + rb.mass * rb.accel * x * psi(x, t);
    const double scale = std::abs(hbar * hbar / (2 * rb.mass) * lap) + std::abs(rb.mass * rb.accel * x * psi(x, t));
    CHECK(std::abs(lhs - rhs) < 1e-5 * scale);
  }
}

TEST_CASE("chirped packet has the requested momentum spread") {
  PacketParams p = rb;
  p.sigma_p *= 3;
  const double s = p.sigma_x;
  // Momentum-space variance from the Fourier pair: fit via the width growth,
  // sigma(t)^2 = sigma_x^2 + (sigma_p t / m)^2 + 2 t cov / m.
  const double t = 0.02;
  const double st = packet_width(t, p);
  const auto m = moments([&](double x) { return gaussian_packet_canonical(x, t, p); }, packet_centroid(t, p),
                         14 * st, 8000);
  CHECK(m.norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::sqrt(m.var) == doctest::Approx(st).epsilon(1e-8));
  CHECK(st > s);
}

TEST_CASE("packet parameters are validated") {
  PacketParams p = rb;
  p.sigma_p = 0.4 * hbar / p.sigma_x;
  CHECK_THROWS_AS(gaussian_packet_canonical(0, 0, p), DomainError);
  CHECK_THROWS_AS(gaussian_packet_canonical(0, -1.0, rb), DomainError);
  p = rb;
  p.mass = 0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("historical packet form deviates from the canonical one") {
  const double s = rb.sigma_x;
  const cplx at0 = gaussian_packet_diagnostic(0.0, 0.0, rb);
  const cplx at2s = gaussian_packet_diagnostic(2 * s, 0.0, rb);
  // Width 2 sigma: exp(-x^2 / (16 sigma^2)).
  CHECK(std::abs(at2s) / std::abs(at0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
  const double canonical = std::abs(gaussian_packet_canonical(0.0, 0.0, rb));
  CHECK(std::abs(std::abs(at0) - canonical) > 0.1 * canonical);
  const auto m = moments([&](double x) { return gaussian_packet_diagnostic(x, 0.0, rb); }, 0.0, 40 * s, 8000);
  CHECK(std::abs(m.norm - 1.0) > 0.1);
}

TEST_CASE("Mach-Zehnder phase") {
  const PulseSequence seq{2 * pi / 780e-9, 0.0, 0.16, 1};
  const AccelerationVector g{0.029, 0.0, 9.8};
  const double phi = mz_phase(seq, g);
  CHECK(phi == doctest::Approx(2 * (2 * pi / 780e-9) * 0.029 * 0.0256).epsilon(1e-14));
  CHECK(phi == doctest::Approx(1.196e4).epsilon(1e-3));

  PulseSequence longer = seq;
  longer.t_sep *= 2;
  CHECK(mz_phase(longer, g) == doctest::Approx(4 * phi).epsilon(1e-14));

  AccelerationVector vertical_only{0.0, 0.0, 9.8};
  CHECK(mz_phase(seq, vertical_only) == 0.0);
  const PulseSequence along_y{0.0, 8e6, 0.16, 1};
  CHECK(mz_phase(along_y, g) == 0.0);
  PulseSequence at_zero = seq;
  at_zero.t_sep = 0;
  CHECK(mz_phase(at_zero, g) == 0.0);

  PulseSequence bad = seq;
  bad.t_sep = -1;
  CHECK_THROWS_AS(mz_phase(bad, g), DomainError);
  bad = seq;
  bad.kick_order = 2;
  CHECK_THROWS_AS(mz_phase(bad, g), DomainError);
}

TEST_CASE("fringe probability") {
  CHECK(fringe_probability(0.0) == 1.0);
  CHECK(fringe_probability(pi) == doctest::Approx(0.0));
  CHECK(fringe_probability(pi / 2) == doctest::Approx(0.5));
  CHECK(fringe_probability(2 * pi) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fringe_probability(NAN), DomainError);
}

TEST_CASE("beam separation") {
  const PulseSequence seq{2 * pi / 780e-9, 0.0, 0.5, 1};
  const double d = beam_separation(seq, constants::rb87_mass);
  CHECK(d == doctest::Approx(2 * hbar * (2 * pi / 780e-9) / constants::rb87_mass * 0.5).epsilon(1e-14));
  CHECK(std::abs(d - 5.9e-3) <= 0.1e-3);
  CHECK_THROWS_AS(beam_separation(seq, 0.0), DomainError);
}
