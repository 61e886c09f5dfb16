#pragma once

#include <complex>

#include "meissner/constants.hpp"

// Atom motion under H = p^2/2m + m g.r (uniform acceleration), the Gaussian
// wave packet in a linear potential, and the three-pulse Mach-Zehnder phase.

namespace meissner {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct TrajectoryState {
  Vec3 position;  // m
  Vec3 velocity;  // m/s
};

struct AccelerationVector {
  double gx = 0.0;
  double gy = 0.0;
  double gz = constants::standard_gravity;
};

/// r(t) = r0 + v0 t - g t^2 / 2, v(t) = v0 - g t. The potential +m g.r
/// pushes the atom towards -g. Throws DomainError for t < 0.
TrajectoryState classical_trajectory(const TrajectoryState& s0, const AccelerationVector& g, double t);

/// One-dimensional Gaussian packet in the potential m*accel*x.
struct PacketParams {
  double sigma_x = 1e-6;   // m
  double sigma_p = constants::hbar / (2 * 1e-6);  // kg m/s
  double mass = constants::rb87_mass;             // kg
  double accel = 0.0;                              // m/s^2

  /// sigma_p = hbar / (2 sigma_x).
  static PacketParams minimum_uncertainty(double sigma_x, double mass, double accel);
  /// Throws DomainError unless sigma_x, sigma_p, mass > 0 and
  /// sigma_x sigma_p >= hbar/2 (to 1e-12 relative).
  void validate() const;
};

/// Closed-form packet. The initial state is
///   (2 pi sigma_x^2)^(-1/4) exp(-(1 - i beta) x^2 / (4 sigma_x^2)),
/// with chirp beta = sqrt((2 sigma_x sigma_p / hbar)^2 - 1) >= 0, evolved
/// exactly: the free packet shifted by -a t^2/2 and boosted to momentum
/// -m a t with accumulated phase -m a^2 t^3 / (6 hbar).
std::complex<double> gaussian_packet_canonical(double x, double t, const PacketParams& p);

/// Packet width sigma(t); for a minimum-uncertainty packet
/// sigma_x sqrt(1 + (hbar t / (2 m sigma_x^2))^2).
double packet_width(double t, const PacketParams& p);

/// Centroid -a t^2 / 2.
double packet_centroid(double t, const PacketParams& p);

/// The historical closed form for the same packet, evaluated term by term
/// as it was written down. Diagnostic only: it is not normalized and its
/// t = 0 limit has width 2 sigma_x. Nothing downstream uses it.
std::complex<double> gaussian_packet_diagnostic(double x, double t, const PacketParams& p);

/// Horizontal light-pulse sequence: split, mirror, recombine, with pulse
/// separation t_sep and first-order (2 hbar k) Kapitza-Dirac kicks.
struct PulseSequence {
  double kx = 0.0;  // rad/m
  double ky = 0.0;  // rad/m
  double t_sep = 0.0;  // s
  int kick_order = 1;

  /// Throws DomainError unless t_sep >= 0 and kick_order == 1.
  void validate() const;
  double k_magnitude() const noexcept;
};

/// phi = 2 (kx gx + ky gy) t^2; gz never contributes.
double mz_phase(const PulseSequence& seq, const AccelerationVector& g);

/// (1 + cos phi) / 2.
double fringe_probability(double phi);

/// Arm separation (2 hbar |k| / m) t_sep.
double beam_separation(const PulseSequence& seq, double mass);

}  // namespace meissner
