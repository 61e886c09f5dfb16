#include "meissner/field.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "meissner/error.hpp"
#include "meissner/fault_injection.hpp"
#include "meissner/kernels.hpp"
#include "meissner/specfun.hpp"

namespace meissner {
namespace {

struct Direction {
  double c;  // cos(theta)
  double s;  // sin(theta)
};

// The axis has no angle; any choice works there because the interior field
// is uniform at r = 0.
Direction direction_of(FieldPoint p, double r) noexcept {
  if (r == 0.0) return {1.0, 0.0};
  return {p.x / r, p.y / r};
}

// B0x cos(theta) + B0y sin(theta): the radial component of the uniform field.
double angular_radial(BackgroundField b0, Direction d) noexcept { return b0.b0x * d.c + b0.b0y * d.s; }
// B0y cos(theta) - B0x sin(theta): the azimuthal component of the uniform field.
double angular_azimuthal(BackgroundField b0, Direction d) noexcept { return b0.b0y * d.c - b0.b0x * d.s; }

// exp(x - X) with x = r/lambda and X = R0/lambda; the interior screening
// factor that multiplies the scaled Bessel quotients.
double screening(double x, double big_x) { return std::exp(x - big_x); }

void require_finite(BackgroundField b0) {
  if (!std::isfinite(b0.b0x) || !std::isfinite(b0.b0y)) throw DomainError("background field must be finite");
}

// Points within rounding of the surface are accepted by both forms.
constexpr double surface_slack = 8.0 * std::numeric_limits<double>::epsilon();

void require_outside(const CylinderGeometry& g, double r, const char* what) {
  if (!(r >= g.r0() * (1.0 - surface_slack)))
    throw DomainError(std::string(what) + ": point lies inside the cylinder (r < R0); use the interior form");
}

void require_inside(const CylinderGeometry& g, double r, const char* what) {
  if (!(r <= g.r0() * (1.0 + surface_slack)))
    throw DomainError(std::string(what) + ": point lies outside the cylinder (r > R0); use the exterior form");
}

}  // namespace

CylinderGeometry::CylinderGeometry(double r0, double lambda) : r0_(r0), lambda_(lambda) {
  if (!std::isfinite(r0) || !std::isfinite(lambda) || r0 <= 0.0 || lambda <= 0.0)
    throw DomainError("cylinder radius and London depth must be positive and finite");
  if (lambda > r0) throw DomainError("London depth must not exceed the cylinder radius");
}

CylinderGeometry CylinderGeometry::unchecked_depth(double r0, double lambda) {
  if (!std::isfinite(r0) || !std::isfinite(lambda) || r0 <= 0.0 || lambda <= 0.0)
    throw DomainError("cylinder radius and London depth must be positive and finite");
  return CylinderGeometry(r0, lambda, Unchecked{});
}

FieldVector to_cartesian(PolarField f, FieldPoint p) noexcept {
  const auto d = direction_of(p, p.radius());
  return {f.br * d.c - f.btheta * d.s, f.br * d.s + f.btheta * d.c};
}

PolarField to_polar(FieldVector f, FieldPoint p) noexcept {
  const auto d = direction_of(p, p.radius());
  return {f.bx * d.c + f.by * d.s, -f.bx * d.s + f.by * d.c};
}

const char* region_name(Region r) noexcept { return r == Region::inside ? "inside" : "outside"; }

double coefficient_c1(const CylinderGeometry& geom) {
  const double r0 = geom.r0();
  const double penetration = 2.0 * r0 * geom.lambda() * specfun::bessel_i_ratio(geom.surface_argument());
  if (fault::is_active(fault::Fault::drop_ratio)) return -r0 * r0;
  const double c1 = penetration - r0 * r0;
  return fault::is_active(fault::Fault::c1_sign) ? -c1 : c1;
}

PolarField polar_field_outside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  require_finite(b0);
  const double r = p.radius();
  require_outside(geom, r, "field_outside");
  const auto d = direction_of(p, r);
  const double dipole = coefficient_c1(geom) / (r * r);
  return {(1.0 + dipole) * angular_radial(b0, d), (1.0 - dipole) * angular_azimuthal(b0, d)};
}

PolarField polar_field_inside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  require_finite(b0);
  const double r = p.radius();
  require_inside(geom, r, "field_inside");
  const auto d = direction_of(p, r);
  const double x = r / geom.lambda();
  const double big_x = geom.surface_argument();
  const double i0_surface = specfun::bessel_i_scaled(0, big_x);
  const double scale = screening(x, big_x) / i0_surface;
  // 2 lambda I1(x) / r = 2 I1(x)/x, finite on the axis.
  const double i1_over_x = specfun::bessel_i1_over_x_scaled(x);
  const double radial = 2.0 * i1_over_x * scale;
  const double sign = fault::is_active(fault::Fault::lambda_sign) ? -1.0 : 1.0;
  const double azimuthal = 2.0 * (specfun::bessel_i_scaled(0, x) - sign * i1_over_x) * scale;
  return {radial * angular_radial(b0, d), azimuthal * angular_azimuthal(b0, d)};
}

FieldVector field_outside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  return to_cartesian(polar_field_outside(geom, b0, p), p);
}

FieldVector field_inside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  return to_cartesian(polar_field_inside(geom, b0, p), p);
}

Region region_of(const CylinderGeometry& geom, FieldPoint p) noexcept {
  return p.radius() <= geom.r0() ? Region::inside : Region::outside;
}

FieldVector field_at(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  return region_of(geom, p) == Region::inside ? field_inside(geom, b0, p) : field_outside(geom, b0, p);
}

double vector_potential_outside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  require_finite(b0);
  const double r = p.radius();
  require_outside(geom, r, "vector_potential_outside");
  // (r + C1/r) S(theta) with r S(theta) = B0x y - B0y x.
  return (1.0 + coefficient_c1(geom) / (r * r)) * (b0.b0x * p.y - b0.b0y * p.x);
}

double vector_potential_inside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  require_finite(b0);
  const double r = p.radius();
  require_inside(geom, r, "vector_potential_inside");
  const double x = r / geom.lambda();
  const double big_x = geom.surface_argument();
  // 2 lambda I1(x)/I0(X) S(theta) = 2 [I1(x)/x] / I0(X) (B0x y - B0y x).
  const double amplitude =
      2.0 * specfun::bessel_i1_over_x_scaled(x) * screening(x, big_x) / specfun::bessel_i_scaled(0, big_x);
  return amplitude * (b0.b0x * p.y - b0.b0y * p.x);
}

double vector_potential_at(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p) {
  return region_of(geom, p) == Region::inside ? vector_potential_inside(geom, b0, p)
                                              : vector_potential_outside(geom, b0, p);
}

void FieldMapGrid::validate() const {
  if (nx < 2 || ny < 2) throw DomainError("field map grid needs at least 2 points per axis");
  if (!(x_min < x_max) || !(y_min < y_max)) throw DomainError("field map bounds must be ordered (min < max)");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
    throw DomainError("field map bounds must be finite");
}

FieldPoint FieldMapGrid::point(std::size_t ix, std::size_t iy) const noexcept {
  const double fx = static_cast<double>(ix) / static_cast<double>(nx - 1);
  const double fy = static_cast<double>(iy) / static_cast<double>(ny - 1);
  return {x_min + fx * (x_max - x_min), y_min + fy * (y_max - y_min)};
}

std::vector<FieldSample> field_map(const CylinderGeometry& geom, BackgroundField b0, const FieldMapGrid& grid) {
  grid.validate();
  require_finite(b0);
  std::vector<FieldSample> out(grid.size());
  kernels::sample_field_parallel(geom, b0, grid, out);
  return out;
}

}  // namespace meissner
