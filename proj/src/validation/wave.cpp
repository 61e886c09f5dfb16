#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>

#include "meissner/constants.hpp"
#include "meissner/error.hpp"
#include "meissner/fault_injection.hpp"
#include "meissner/kernels.hpp"
#include "meissner/validation.hpp"

namespace meissner::validation {
namespace {

using constants::hbar;
using constants::pi;

// FFTW's planner is not re-entrant; execution on a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPair {
 public:
  explicit FftPair(std::size_t n) : n_(n) {
    buffer_ = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  void forward(WaveFunction& psi) const { run(forward_, psi); }
  void backward(WaveFunction& psi) const { run(backward_, psi); }

 private:
  void run(fftw_plan plan, WaveFunction& psi) const {
    auto* data = reinterpret_cast<fftw_complex*>(psi.data());
    fftw_execute_dft(plan, data, data);
  }

  std::size_t n_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

void apply(WaveFunction& psi, const WaveFunction& phase, bool parallel) {
  if (parallel)
    kernels::multiply_parallel(psi, phase);
  else
    kernels::multiply_serial(psi, phase);
}

std::complex<double> unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

void WaveGrid::validate() const {
  if (n_points < 16 || !std::has_single_bit(n_points)) throw DomainError("wave grid size must be a power of two >= 16");
  if (!(x_max > x_min)) throw DomainError("wave grid bounds must satisfy x_min < x_max");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("wave grid dt must be positive");
  if (!(mass > 0.0)) throw DomainError("wave grid mass must be positive");
}

double WaveGrid::potential_phase_per_step(double accel) const noexcept {
  return mass * std::abs(accel) * std::max(std::abs(x_min), std::abs(x_max)) * dt / hbar;
}

double norm_squared(const WaveFunction& psi, const WaveGrid& grid) {
  double sum = 0.0;
  for (const auto& v : psi) sum += std::norm(v);
  return sum * grid.dx();
}

std::complex<double> inner_product(const WaveFunction& a, const WaveFunction& b, const WaveGrid& grid) {
  if (a.size() != b.size()) throw DomainError("inner product of wave functions on different grids");
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum * grid.dx();
}

double edge_probability(const WaveFunction& psi, const WaveGrid& grid) {
  const std::size_t band = std::max<std::size_t>(1, psi.size() / 40);
  double sum = 0.0;
  for (std::size_t i = 0; i < band; ++i) sum += std::norm(psi[i]) + std::norm(psi[psi.size() - 1 - i]);
  return sum * grid.dx();
}

WaveFunction sample(const std::function<std::complex<double>(double)>& psi, const WaveGrid& grid) {
  grid.validate();
  WaveFunction out(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) out[i] = psi(grid.x(i));
  return out;
}

WaveFunction split_step_evolve(const WaveFunction& psi0, double accel, const WaveGrid& grid, double t,
                               bool parallel) {
  grid.validate();
  if (psi0.size() != grid.n_points) throw DomainError("wave function size does not match the grid");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolution time must be non-negative");
  if (std::abs(norm_squared(psi0, grid) - 1.0) > 1e-10) throw DomainError("initial wave function is not normalized");

  WaveFunction psi = psi0;
  if (t > 0.0) {
    const std::size_t n = grid.n_points;
    const auto steps = static_cast<std::size_t>(std::ceil(t / grid.dt - 1e-9));
    const double dt = t / static_cast<double>(std::max<std::size_t>(steps, 1));

    WaveFunction half(n), full(n), kinetic(n);
    const double length = grid.x_max - grid.x_min;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = grid.mass * accel * grid.x(i) / hbar;
      half[i] = unit_phase(-0.5 * v * dt);
      full[i] = unit_phase(-v * dt);
      const double m = i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
      const double k = 2.0 * pi * m / length;
      kinetic[i] = unit_phase(-hbar * k * k * dt / (2.0 * grid.mass)) / static_cast<double>(n);
    }

    const FftPair fft(n);
    apply(psi, half, parallel);
    for (std::size_t s = 0; s < steps; ++s) {
      fft.forward(psi);
      apply(psi, kinetic, parallel);
      fft.backward(psi);
      apply(psi, s + 1 == steps ? half : full, parallel);
    }
  }
  if (edge_probability(psi, grid) >= escape_threshold)
    throw TruncationError("wave packet reached the edge of the grid");
  return psi;
}

InterferometerScenario project_on_beam(const InterferometerConfig& cfg, HorizontalAcceleration g) {
  cfg.pulses.validate();
  const double k = cfg.pulses.k_magnitude();
  if (!(k > 0.0)) throw DomainError("interferometer needs a nonzero wave vector");
  return {k, (cfg.pulses.kx * g.gx + cfg.pulses.ky * g.gy) / k, cfg.pulses.t_sep, cfg.atom.mass, cfg.sigma_x};
}

WaveGrid interferometer_grid(const InterferometerScenario& s, std::size_t n_points) {
  if (!(s.t_sep > 0.0) || !(s.mass > 0.0) || !(s.sigma_x > 0.0)) throw DomainError("invalid interferometer scenario");
  const double total = 2.0 * s.t_sep;
  const double velocity = 2.0 * hbar * s.k / s.mass;
  const double width = s.sigma_x * std::hypot(1.0, hbar * total / (2.0 * s.mass * s.sigma_x * s.sigma_x));
  const double fall = 0.5 * s.accel * total * total;
  const double lo = std::min({0.0, -fall, velocity * s.t_sep - fall}) - 10.0 * width;
  const double hi = std::max({0.0, -fall, velocity * s.t_sep, velocity * s.t_sep - fall}) + 10.0 * width;
  const double pad = 0.1 * (hi - lo);

  WaveGrid grid;
  grid.n_points = n_points;
  grid.mass = s.mass;
  grid.x_min = lo - pad;
  grid.x_max = hi + pad;

  // Largest wave number the packets carry: kick, gravity and packet bandwidth.
  const double k_needed = 2.0 * s.k + s.mass * std::abs(s.accel) * total / hbar + 8.0 / (2.0 * s.sigma_x);
  if (pi / grid.dx() < 1.2 * k_needed)
    throw DomainError("interferometer scenario does not fit on the wave grid; reduce k, t or accel");

  const double x_far = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
  const double rate = s.mass * std::abs(s.accel) * x_far / hbar;
  const double dt_phase = rate > 0.0 ? (pi / 8.0) / rate : s.t_sep;
  grid.dt = std::min(dt_phase, s.t_sep / 64.0);
  return grid;
}

std::complex<double> numeric_interferometer(const InterferometerScenario& s, const WaveGrid& grid) {
  grid.validate();
  if (!(s.t_sep > 0.0)) throw DomainError("interferometer needs t_sep > 0");
  const double norm = std::pow(2.0 * pi * s.sigma_x * s.sigma_x, -0.25);
  const WaveFunction psi0 =
      sample([&](double x) { return std::complex<double>(norm * std::exp(-x * x / (4.0 * s.sigma_x * s.sigma_x))); },
             grid);

  WaveFunction up(grid.n_points), down(grid.n_points);
  const double final_sign = fault::is_active(fault::Fault::kick_sign) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    up[i] = unit_phase(2.0 * s.k * grid.x(i));
    down[i] = unit_phase(final_sign * 2.0 * s.k * grid.x(i));
  }
  // Same convention as split_step_evolve: potential +m a x.
  const double slope = s.accel;
  const auto kick = [](WaveFunction psi, const WaveFunction& phase) {
    kernels::multiply_serial(psi, phase);
    return psi;
  };

  WaveFunction arm1 = kick(psi0, up);
  arm1 = split_step_evolve(arm1, slope, grid, s.t_sep);
  arm1 = kick(arm1, down);
  arm1 = split_step_evolve(arm1, slope, grid, s.t_sep);

  WaveFunction arm2 = split_step_evolve(psi0, slope, grid, s.t_sep);
  arm2 = kick(arm2, up);
  arm2 = split_step_evolve(arm2, slope, grid, s.t_sep);
  arm2 = kick(arm2, down);

  return inner_product(arm1, arm2, grid);
}

void write_wave_csv(const std::string& path, const WaveFunction& psi, const WaveGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "x,re_psi,im_psi\n" << std::setprecision(17);
  for (std::size_t i = 0; i < psi.size(); ++i) out << grid.x(i) << ',' << psi[i].real() << ',' << psi[i].imag() << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace meissner::validation
