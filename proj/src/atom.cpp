#include "meissner/atom.hpp"

#include <cmath>

#include "meissner/error.hpp"

namespace meissner {

using namespace std::complex_literals;
using constants::hbar;
using constants::pi;

TrajectoryState classical_trajectory(const TrajectoryState& s0, const AccelerationVector& g, double t) {
  if (!(t >= 0.0)) throw DomainError("trajectory time must be >= 0");
  const double half_t2 = 0.5 * t * t;
  TrajectoryState s;
  s.position = {s0.position.x + s0.velocity.x * t - g.gx * half_t2,
                s0.position.y + s0.velocity.y * t - g.gy * half_t2,
                s0.position.z + s0.velocity.z * t - g.gz * half_t2};
  s.velocity = {s0.velocity.x - g.gx * t, s0.velocity.y - g.gy * t, s0.velocity.z - g.gz * t};
  return s;
}

PacketParams PacketParams::minimum_uncertainty(double sigma_x, double mass, double accel) {
  return {sigma_x, hbar / (2.0 * sigma_x), mass, accel};
}

void PacketParams::validate() const {
  if (!(sigma_x > 0.0) || !(sigma_p > 0.0) || !(mass > 0.0)) throw DomainError("packet widths and mass must be positive");
  if (sigma_x * sigma_p < 0.5 * hbar * (1.0 - 1e-12))
    throw DomainError("packet violates the uncertainty bound sigma_x sigma_p >= hbar/2");
}

namespace {

double chirp(const PacketParams& p) {
  const double ratio = 2.0 * p.sigma_x * p.sigma_p / hbar;
  return ratio > 1.0 ? std::sqrt(ratio * ratio - 1.0) : 0.0;
}

// exp(-a0 x^2) evolved freely for time t: the width parameter becomes
// a0 / (1 + 2 i hbar a0 t / m) and the amplitude picks up (1 + ...)^(-1/2).
struct FreeGaussian {
  std::complex<double> spread;  // 1 + 2 i hbar a0 t / m
  std::complex<double> width;   // a(t)
};

FreeGaussian evolve_free(const PacketParams& p, double t) {
  const std::complex<double> a0 = (1.0 - 1i * chirp(p)) / (4.0 * p.sigma_x * p.sigma_x);
  const std::complex<double> spread = 1.0 + 2i * hbar * a0 * t / p.mass;
  return {spread, a0 / spread};
}

}  // namespace

std::complex<double> gaussian_packet_canonical(double x, double t, const PacketParams& p) {
  p.validate();
  if (!(t >= 0.0)) throw DomainError("packet time must be >= 0");
  const auto free = evolve_free(p, t);
  const double norm = std::pow(2.0 * pi * p.sigma_x * p.sigma_x, -0.25);
  const double xi = x + 0.5 * p.accel * t * t;
  const double m = p.mass;
  const double a = p.accel;
  const double phase = -(m * a * t * x + m * a * a * t * t * t / 6.0) / hbar;
  return norm / std::sqrt(free.spread) * std::exp(-free.width * xi * xi + 1i * phase);
}

double packet_width(double t, const PacketParams& p) {
  const auto free = evolve_free(p, t);
  return std::sqrt(1.0 / (4.0 * free.width.real()));
}

double packet_centroid(double t, const PacketParams& p) { return -0.5 * p.accel * t * t; }

std::complex<double> gaussian_packet_diagnostic(double x, double t, const PacketParams& p) {
  p.validate();
  if (!(t >= 0.0)) throw DomainError("packet time must be >= 0");
  const double m = p.mass;
  const double g = p.accel;
  const double sx = p.sigma_x;
  const double sp = p.sigma_p;
  const std::complex<double> denom = hbar * m + 2i * t * sp * sp;
  const std::complex<double> psi_t =
      std::pow(1.0 / (2.0 * pi), -0.25) * std::sqrt(2.0 * m * sp / denom) *
      std::exp(-m * m * g * g * t * t / (4.0 * sp * sp) - 5i * m * g * g * t * t * t / (6.0 * hbar) +
               hbar * m * m * m * g * g * t * t / (denom * sp * sp));
  const std::complex<double> bracket =
      (4.0 * x * g * t * t - x * x - g * g * t * t * t * t) / (16.0 * sx * sx) -
      1i * m * (g * g * t * t * t - 2.0 * g * t * x) / (2.0 * hbar);
  return psi_t * std::exp(hbar * m / denom * bracket);
}

void PulseSequence::validate() const {
  if (!(t_sep >= 0.0) || !std::isfinite(t_sep)) throw DomainError("pulse separation must be >= 0");
  if (kick_order != 1) throw DomainError("only first-order (2 hbar k) kicks are modelled");
  if (!std::isfinite(kx) || !std::isfinite(ky)) throw DomainError("wave vector must be finite");
}

double PulseSequence::k_magnitude() const noexcept { return std::hypot(kx, ky); }

double mz_phase(const PulseSequence& seq, const AccelerationVector& g) {
  seq.validate();
  return 2.0 * (seq.kx * g.gx + seq.ky * g.gy) * seq.t_sep * seq.t_sep;
}

double fringe_probability(double phi) {
  if (!std::isfinite(phi)) throw DomainError("phase must be finite");
  return 0.5 * (1.0 + std::cos(phi));
}

double beam_separation(const PulseSequence& seq, double mass) {
  seq.validate();
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  return 2.0 * hbar * seq.k_magnitude() / mass * seq.t_sep;
}

}  // namespace meissner
