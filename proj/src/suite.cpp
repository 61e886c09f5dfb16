#include "meissner/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include "meissner/atom.hpp"
#include "meissner/constants.hpp"
#include "meissner/error.hpp"
#include "meissner/field.hpp"
#include "meissner/linearized.hpp"
#include "meissner/sensitivity.hpp"
#include "meissner/validation.hpp"

namespace meissner::suite {
namespace {

using constants::pi;
namespace val = validation;

// Parameters of the reference configuration: R0 = 1 cm, lambda = 0.01 R0,
// B0x = B0y = 5e-5 T, anchor (2, 2) cm.
constexpr double ref_r0 = 0.01;
constexpr double ref_lambda = 1e-4;
constexpr double ref_b = 5e-5;
constexpr double ref_anchor = 0.02;
constexpr double light_mass = 1e-25;

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Collects named sub-measurements; the first one is the headline metric.
class Parts {
 public:
  void add(const std::string& name, double value, double limit, bool ok) {
    if (detail_.empty()) {
      measured_ = value;
      threshold_ = limit;
    }
    if (!detail_.empty()) detail_ += "; ";
    detail_ += name + format("=%.4g (limit %.4g)", value, limit);
    if (!ok) detail_ += " FAIL";
    passed_ = passed_ && ok;
  }
  void below(const std::string& name, double value, double limit) { add(name, value, limit, value <= limit); }
  void within(const std::string& name, double value, double lo, double hi) {
    if (detail_.empty()) {
      measured_ = value;
      threshold_ = hi;
    }
    const bool ok = value >= lo && value <= hi;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += name + format("=%.4g (range %.4g to %.4g)", value, lo, hi);
    if (!ok) detail_ += " FAIL";
    passed_ = passed_ && ok;
  }
  void note(const std::string& text) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += text;
  }

  void fill(CheckResult& r) const {
    r.passed = passed_;
    r.measured = measured_;
    r.threshold = threshold_;
    r.detail = detail_;
  }

 private:
  bool passed_ = true;
  double measured_ = 0.0;
  double threshold_ = 0.0;
  std::string detail_;
};

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

FieldPoint polar_point(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

const BackgroundField reference_field{ref_b, ref_b};
CylinderGeometry reference_geometry() { return {ref_r0, ref_lambda}; }

// -- c01 ---------------------------------------------------------------------

void boundary_matching(Parts& parts, const SuiteOptions&) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> field(-1e-4, 1e-4);
  double worst_a = 0.0, worst_br = 0.0, worst_bt = 0.0;
  for (int n = 0; n < 100; ++n) {
    const double r0 = log_uniform(rng, 1e-3, 0.1);
    const CylinderGeometry geom(r0, log_uniform(rng, 1e-4 * r0, r0));
    const BackgroundField b0{field(rng), field(rng)};
    const FieldPoint p = polar_point(r0, angle(rng));
    const PolarField out = polar_field_outside(geom, b0, p);
    const PolarField in = polar_field_inside(geom, b0, p);
    worst_a = std::max(worst_a, relative(vector_potential_outside(geom, b0, p), vector_potential_inside(geom, b0, p)));
    worst_br = std::max(worst_br, relative(out.br, in.br));
    worst_bt = std::max(worst_bt, relative(out.btheta, in.btheta));
  }
  const double worst = std::max({worst_a, worst_br, worst_bt});
  parts.below("max_relative_jump", worst, 1e-10);
  parts.note(format("A_z %.3g, B_r %.3g", worst_a, worst_br));
  parts.note(format("B_theta %.3g", worst_bt));
}

// -- c02 ---------------------------------------------------------------------

void pde_oracle(Parts& parts, const SuiteOptions& opts) {
  const CylinderGeometry geom = reference_geometry();
  val::AnnulusMesh mesh = val::AnnulusMesh::with_defaults(geom);
  if (opts.fast) mesh.n_r = 200;
  const auto exact = [&](FieldPoint p) { return field_at(geom, reference_field, p); };
  const auto coarse = val::numeric_relax_solver(mesh, reference_field);
  const auto fine = val::numeric_relax_solver(mesh.refined(), reference_field);
  const auto e1 = val::compare_relax(coarse, geom, exact);
  const auto e2 = val::compare_relax(fine, geom, exact);
  const double ratio = e2.max_error > 0.0 ? e1.max_error / e2.max_error : 0.0;
  parts.below("linf_relative_error", e1.max_error, 1e-3);
  parts.within("convergence_ratio", ratio, 3.5, 4.5);
  parts.note(format("mesh %.0f x %.0f", static_cast<double>(mesh.n_r), static_cast<double>(mesh.n_theta)) +
             format(", refined error %.3g, sweeps %.0f", e2.max_error, static_cast<double>(coarse.sweeps)));
}

// -- c03 ---------------------------------------------------------------------

void figure_reproduction(Parts& parts, const SuiteOptions& opts) {
  const CylinderGeometry geom = reference_geometry();
  const std::size_t n = opts.fast ? 101 : 201;
  const FieldMapGrid grid{-3 * ref_r0, 3 * ref_r0, -3 * ref_r0, 3 * ref_r0, n, n};
  const auto samples = field_map(geom, reference_field, grid);
  const double b_norm = reference_field.magnitude();
  double interior = 0.0;
  for (const auto& s : samples)
    if (s.point.radius() < ref_r0 - 5 * ref_lambda) interior = std::max(interior, s.field.magnitude() / b_norm);
  double radial = 0.0;
  for (int j = 0; j < 720; ++j) {
    const PolarField f = polar_field_outside(geom, reference_field, polar_point(ref_r0, 2 * pi * j / 720.0));
    radial = std::max(radial, std::abs(f.br) / b_norm);
  }
  parts.add("interior_max_B_over_B0", interior, 1e-3, interior < 1e-3);
  parts.below("exterior_Br_at_surface_over_B0", radial, 1e-2);
}

// -- c04 ---------------------------------------------------------------------

void gamma_check(Parts& parts, const SuiteOptions&) {
  const CylinderGeometry geom(ref_r0, ref_lambda);
  const AnchorPoint anchor{ref_anchor, ref_anchor};
  const GammaCoefficients g = gamma_coefficients(geom, anchor);
  const double expected[] = {-0.0625, 0.0625, -0.03125, -0.03125};
  const double got[] = {g.g1, g.g2, g.g3, g.g4};
  double closed = 0.0;
  for (int i = 0; i < 4; ++i) closed = std::max(closed, relative(got[i], expected[i]));
  parts.below("closed_form_relative_error", closed, 1e-15);

  // Central differences of the lambda -> 0 exterior field.
  const auto limit = CylinderGeometry::unchecked_depth(ref_r0, 1e-9 * ref_r0);
  const double h = 1e-6 * ref_r0;
  const double b = 1.0;
  const auto jx = val::finite_difference_jacobian(
      [&](FieldPoint p) { return field_outside(limit, {b, 0.0}, p); }, anchor.point(), h, limit);
  const auto jy = val::finite_difference_jacobian(
      [&](FieldPoint p) { return field_outside(limit, {0.0, b}, p); }, anchor.point(), h, limit);
  const double r0 = ref_r0;
  const double fd[] = {jx[0][0] * r0 / b, jx[0][1] * r0 / b, -jy[0][0] * r0 / b, -jy[0][1] * r0 / b};
  double structure = 0.0;
  for (int i = 0; i < 4; ++i) structure = std::max(structure, relative(fd[i], got[i]));
  parts.below("jacobian_structure_relative_error", structure, 1e-4);
  parts.note(format("finite-difference gammas (%.6g, %.6g", fd[0], fd[1]) + format(", %.6g, %.6g)", fd[2], fd[3]));
}

// -- c05 ---------------------------------------------------------------------

void acceleration_check(Parts& parts, const SuiteOptions&) {
  const CylinderGeometry geom(ref_r0, ref_lambda);
  AtomParams atom;
  atom.mass = light_mass;
  const auto g = induced_accelerations(geom, reference_field, {ref_anchor, ref_anchor}, atom);
  // mu_B / (m R0) times the bracket (g1 - g3) B - (g1 + g3) B = 0.0625 B.
  const double reference = constants::bohr_magneton / (light_mass * ref_r0) * 0.0625 * ref_b;
  parts.below("gx_relative_error", relative(g.gx, reference), 1e-4);
  parts.below("gy_relative_error", relative(g.gy, reference), 1e-4);
  parts.note(format("gx=%.10g gy=%.10g m/s^2", g.gx, g.gy));
}

// -- c06 ---------------------------------------------------------------------

void interferometer_check(Parts& parts, const SuiteOptions& opts) {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> k_dist(1e6, 8.0554e6), a_dist(0.01, 0.1), t_dist(1e-3, 1e-2);
  double worst_phase = 0.0, worst_modulus = 0.0;
  const std::size_t points = opts.fast ? (1u << 13) : (1u << 14);
  for (int n = 0; n < 10; ++n) {
    val::InterferometerScenario s;
    s.k = k_dist(rng);
    s.accel = a_dist(rng);
    s.t_sep = t_dist(rng);
    const auto grid = val::interferometer_grid(s, points);
    const auto overlap = val::numeric_interferometer(s, grid);
    const double phase = 2.0 * s.k * s.accel * s.t_sep * s.t_sep;
    worst_phase = std::max(worst_phase, std::abs(std::remainder(std::arg(overlap) - phase, 2 * pi)));
    worst_modulus = std::max(worst_modulus, std::abs(std::abs(overlap) - 1.0));
  }
  parts.below("max_phase_error_rad", worst_phase, 1e-4);
  parts.below("max_modulus_deviation", worst_modulus, 1e-6);
}

// -- c07 ---------------------------------------------------------------------

void packet_check(Parts& parts, const SuiteOptions& opts) {
  const double accel = 0.029;
  const double t_end = 1e-3;
  const auto p = PacketParams::minimum_uncertainty(1e-6, 1.443e-25, accel);
  val::WaveGrid grid;
  grid.mass = p.mass;
  grid.x_min = -2.5e-5;
  grid.x_max = 2.5e-5;
  grid.n_points = opts.fast ? (1u << 11) : (1u << 12);
  grid.dt = 1e-5;

  const auto psi0 = val::sample([&](double x) { return gaussian_packet_canonical(x, 0.0, p); }, grid);
  double deviation = 0.0, norm_drift = 0.0, centroid_error = 0.0;
  const double peak = std::abs(gaussian_packet_canonical(packet_centroid(t_end, p), t_end, p));
  // Five sampled times; the last is the comparison time.
  for (int k = 1; k <= 5; ++k) {
    const double t = t_end * k / 5.0;
    const auto psi = val::split_step_evolve(psi0, accel, grid, t);
    if (k == 5)
      for (std::size_t i = 0; i < grid.n_points; ++i)
        deviation = std::max(deviation, std::abs(psi[i] - gaussian_packet_canonical(grid.x(i), t, p)) / peak);
    norm_drift = std::max(norm_drift, std::abs(val::norm_squared(psi, grid) - 1.0));
    const auto exact = val::sample([&](double x) { return gaussian_packet_canonical(x, t, p); }, grid);
    norm_drift = std::max(norm_drift, std::abs(val::norm_squared(exact, grid) - 1.0));
    double centroid = 0.0;
    for (std::size_t i = 0; i < grid.n_points; ++i) centroid += grid.x(i) * std::norm(psi[i]);
    centroid *= grid.dx();
    const auto classical = classical_trajectory({}, AccelerationVector{accel, 0.0, 0.0}, t);
    centroid_error = std::max(centroid_error, relative(centroid, classical.position.x));
  }
  parts.below("max_deviation_over_peak", deviation, 1e-6);
  parts.below("norm_drift", norm_drift, 1e-8);
  parts.below("centroid_relative_error", centroid_error, 1e-8);
}

// -- c08 ---------------------------------------------------------------------

void sensitivity_check(Parts& parts, const SuiteOptions&) {
  const CylinderGeometry geom(ref_r0, ref_lambda);
  AtomParams atom;
  atom.mass = light_mass;
  const auto gammas = gamma_coefficients(geom, {ref_anchor, ref_anchor});
  const AccelerationUncertainty dg{1e-8, 1e-8};
  const auto db = field_uncertainty(dg, gammas, atom, geom);
  const double dbx = std::abs(db.db0x), dby = std::abs(db.db0y);
  // Quoted to two figures: 1.7e-11 T.
  const double quoted = 1.7e-11;
  parts.below("db0x_vs_1.7e-11", std::abs(dbx - quoted) / quoted, 0.05 / 1.7);
  parts.below("db0y_vs_1.7e-11", std::abs(dby - quoted) / quoted, 0.05 / 1.7);

  const auto linear = propagate_linear(dg, acceleration_matrix(gammas, atom, geom.r0()));
  parts.below("agreement_with_inverse_matrix",
              std::max(relative(db.db0x, linear.db0x), relative(db.db0y, linear.db0y)), 1e-8);

  const auto small = field_uncertainty({1e-12, 1e-12}, gammas, atom, geom);
  const double scaling = std::max(relative(small.db0x, 1e-4 * db.db0x), relative(small.db0y, 1e-4 * db.db0y));
  parts.below("linear_scaling_error", scaling, 1e-12);
  const double tiny = std::max(std::abs(small.db0x), std::abs(small.db0y));
  parts.within("scaled_db_T", tiny, 1e-15, 1e-14);
  parts.note(format("db0x=%.6g T db0y=%.6g T", dbx, dby));
}

// -- c09 ---------------------------------------------------------------------

void separation_check(Parts& parts, const SuiteOptions&) {
  PulseSequence seq;
  seq.kx = 2 * pi / constants::rb87_d2_wavelength;
  seq.t_sep = 0.5;
  const double d = beam_separation(seq, constants::rb87_mass);
  parts.within("separation_mm", d * 1e3, 5.8, 6.0);
}

// -- c10 ---------------------------------------------------------------------

void round_trip_check(Parts& parts, const SuiteOptions&) {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi), field(-1e-4, 1e-4), spread(1.2, 5.0);
  double worst = 0.0;
  int accepted = 0, rejected = 0;
  while (accepted < 50) {
    const double r0 = log_uniform(rng, 1e-3, 0.1);
    const CylinderGeometry geom(r0, log_uniform(rng, 1e-4 * r0, 0.1 * r0));
    const double phi = angle(rng);
    const AnchorPoint anchor{spread(rng) * r0 * std::cos(phi), spread(rng) * r0 * std::sin(phi)};
    if (!(anchor.radius() > r0)) continue;
    AtomParams atom;
    atom.mass = log_uniform(rng, 1e-26, 1e-24);
    const BackgroundField b0{field(rng), field(rng)};
    const auto gammas = gamma_coefficients(geom, anchor);
    try {
      const auto g = induced_accelerations(gammas, b0, atom, r0);
      const auto back = acceleration_to_field(g, gammas, atom, geom);
      const double scale = b0.magnitude();
      worst = std::max(worst, std::hypot(back.b0x - b0.b0x, back.b0y - b0.b0y) / scale);
      ++accepted;
    } catch (const DegenerateGeometryError&) {
      ++rejected;
    }
  }
  parts.below("max_relative_round_trip_error", worst, 1e-10);
  parts.note(format("%d configurations, %d degenerate anchors redrawn", accepted, rejected));
}

// -- extras --------------------------------------------------------------------

// Laplacian by Richardson extrapolation of the five-point stencil at h and
// h/2, which removes the O(h^2) term.
double richardson_laplacian(const val::ScalarFieldFn& fn, FieldPoint p, double h) {
  return (4.0 * val::finite_difference_laplacian(fn, p, 0.5 * h) - val::finite_difference_laplacian(fn, p, h)) / 3.0;
}

// Interior points at depth lambda..5 lambda (capped so r stays positive),
// for the reference geometry and a weakly screening one where the 1/x terms
// of the interior solution are not small.
template <typename Fn>
double worst_over_interior(unsigned seed, Fn&& residual_at) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi), unit(0.0, 1.0);
  double worst = 0.0;
  for (const double depth_ratio : {0.01, 0.2}) {
    const CylinderGeometry geom(ref_r0, depth_ratio * ref_r0);
    const double lambda = geom.lambda();
    const double deepest = std::min(5.0 * lambda, ref_r0 - 0.5 * lambda);
    for (int n = 0; n < 50; ++n) {
      const double depth = lambda + unit(rng) * (deepest - lambda);
      worst = std::max(worst, residual_at(geom, polar_point(ref_r0 - depth, angle(rng))));
    }
  }
  return worst;
}

void london_potential_check(Parts& parts, const SuiteOptions&) {
  const double worst = worst_over_interior(2001, [](const CylinderGeometry& geom, FieldPoint p) {
    const double lambda = geom.lambda();
    const auto a = [&](FieldPoint q) { return vector_potential_inside(geom, reference_field, q); };
    const double value = a(p);
    const double residual = richardson_laplacian(a, p, lambda / 50) - value / (lambda * lambda);
    return std::abs(residual) / (std::abs(value) / (lambda * lambda));
  });
  parts.below("max_relative_london_residual_A", worst, 1e-6);
}

void london_field_check(Parts& parts, const SuiteOptions&) {
  const double worst = worst_over_interior(2002, [](const CylinderGeometry& geom, FieldPoint p) {
    const double lambda = geom.lambda();
    const auto b = [&](FieldPoint q) { return field_inside(geom, reference_field, q); };
    const FieldVector value = b(p);
    const FieldVector residual = val::finite_difference_laplacian(b, p, lambda / 50) - (1.0 / (lambda * lambda)) * value;
    return residual.magnitude() / (value.magnitude() / (lambda * lambda));
  });
  parts.below("max_relative_london_residual_B", worst, 1e-3);
}

void exterior_div_curl_check(Parts& parts, const SuiteOptions&) {
  std::mt19937_64 rng(2003);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi), radius(1.1, 4.0);
  const CylinderGeometry geom = reference_geometry();
  const auto b = [&](FieldPoint p) { return field_outside(geom, reference_field, p); };
  const double h = 1e-4 * ref_r0;
  const double scale = reference_field.magnitude() / ref_r0;
  double div = 0.0, curl = 0.0;
  for (int n = 0; n < 100; ++n) {
    const FieldPoint p = polar_point(radius(rng) * ref_r0, angle(rng));
    div = std::max(div, std::abs(val::finite_difference_divergence(b, p, h)) / scale);
    curl = std::max(curl, std::abs(val::finite_difference_curl(b, p, h)) / scale);
  }
  parts.below("max_divergence", div, 1e-5);
  parts.below("max_curl", curl, 1e-5);
}

void potential_curl_check(Parts& parts, const SuiteOptions&) {
  std::mt19937_64 rng(2004);
  std::uniform_real_distribution<double> angle(0.0, 2 * pi), radius(1.05, 4.0);
  const CylinderGeometry geom = reference_geometry();
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const double r = radius(rng) * ref_r0;
    const double theta = angle(rng);
    const double h = 1e-6 * r;
    const auto a = [&](double rr, double tt) { return vector_potential_outside(geom, reference_field, polar_point(rr, tt)); };
    const double br = (a(r, theta + h / r) - a(r, theta - h / r)) / (2 * h);
    const double bt = -(a(r + h, theta) - a(r - h, theta)) / (2 * h);
    const PolarField f = polar_field_outside(geom, reference_field, polar_point(r, theta));
    const double scale = reference_field.magnitude();
    worst = std::max({worst, std::abs(br - f.br) / scale, std::abs(bt - f.btheta) / scale});
  }
  parts.below("max_curl_A_minus_B", worst, 1e-6);
}

struct Entry {
  const char* id;
  const char* name;
  double time_limit;
  void (*run)(Parts&, const SuiteOptions&);
};

constexpr Entry entries[] = {
    {"c01", "boundary matching at r = R0", 1.0, boundary_matching},
    {"c02", "relaxation oracle vs closed-form field", 120.0, pde_oracle},
    {"c03", "reference field map (screening and tangential exterior field)", 60.0, figure_reproduction},
    {"c04", "gamma coefficients and gradient structure", 1.0, gamma_check},
    {"c05", "induced acceleration", 1.0, acceleration_check},
    {"c06", "interferometer phase law", 300.0, interferometer_check},
    {"c07", "wave-packet oracle", 60.0, packet_check},
    {"c08", "field sensitivity", 1.0, sensitivity_check},
    {"c09", "beam separation", 1.0, separation_check},
    {"c10", "acceleration/field round trip", 1.0, round_trip_check},
    {"x01", "London equation for the interior potential", 10.0, london_potential_check},
    {"x02", "London equation for the interior field", 10.0, london_field_check},
    {"x03", "exterior field divergence and curl", 10.0, exterior_div_curl_check},
    {"x04", "exterior field as curl of the potential", 10.0, potential_curl_check},
};

}  // namespace

std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& e : entries) ids.emplace_back(e.id);
  return ids;
}

CheckResult run_check(const std::string& id, const SuiteOptions& opts) {
  const auto it = std::find_if(std::begin(entries), std::end(entries), [&](const Entry& e) { return id == e.id; });
  if (it == std::end(entries)) throw std::invalid_argument("unknown check id: " + id);
  CheckResult result;
  result.id = it->id;
  result.name = it->name;
  result.time_limit = it->time_limit;
  Parts parts;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->run(parts, opts);
    parts.fill(result);
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.seconds > result.time_limit) {
    result.passed = false;
    result.detail += format("; runtime %.3g s over the %.3g s limit", result.seconds, result.time_limit);
  }
  return result;
}

std::vector<CheckResult> run_all(const SuiteOptions& opts) {
  std::vector<CheckResult> out;
  for (const auto& e : entries) out.push_back(run_check(e.id, opts));
  return out;
}

}  // namespace meissner::suite
