#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Magnetic field of an infinitely long superconducting cylinder (axis along
// z, radius R0, London depth lambda) placed in a uniform transverse
// background field (B0x, B0y). Exterior: Laplace solution for A_z with a
// dipole correction C1/r. Interior: London-screened solution built from
// I_1(r/lambda). SI units throughout.

namespace meissner {

class CylinderGeometry {
 public:
  /// Throws DomainError unless 0 < lambda <= r0 and both finite.
  CylinderGeometry(double r0, double lambda);

  /// Like the checked constructor but allows lambda > r0 (weakly screening
  /// cylinders used to probe the no-screening limit).
  static CylinderGeometry unchecked_depth(double r0, double lambda);

  double r0() const noexcept { return r0_; }
  double lambda() const noexcept { return lambda_; }
  /// R0 / lambda, the argument of the Bessel functions at the surface.
  double surface_argument() const noexcept { return r0_ / lambda_; }

 private:
  struct Unchecked {};
  CylinderGeometry(double r0, double lambda, Unchecked) noexcept : r0_(r0), lambda_(lambda) {}
  double r0_;
  double lambda_;
};

struct BackgroundField {
  double b0x = 0.0;
  double b0y = 0.0;

  double magnitude() const noexcept { return std::hypot(b0x, b0y); }
};

struct FieldPoint {
  double x = 0.0;
  double y = 0.0;

  double radius() const noexcept { return std::hypot(x, y); }
};

struct FieldVector {
  double bx = 0.0;
  double by = 0.0;

  double magnitude() const noexcept { return std::hypot(bx, by); }

  friend FieldVector operator+(FieldVector a, FieldVector b) noexcept { return {a.bx + b.bx, a.by + b.by}; }
  friend FieldVector operator-(FieldVector a, FieldVector b) noexcept { return {a.bx - b.bx, a.by - b.by}; }
  friend FieldVector operator*(double s, FieldVector a) noexcept { return {s * a.bx, s * a.by}; }
};

/// Polar components at a point; convert with to_cartesian().
struct PolarField {
  double br = 0.0;
  double btheta = 0.0;
};

/// B_x = B_r cos(theta) - B_theta sin(theta), B_y = B_r sin(theta) + B_theta cos(theta).
FieldVector to_cartesian(PolarField f, FieldPoint p) noexcept;
PolarField to_polar(FieldVector f, FieldPoint p) noexcept;

enum class Region { inside, outside };
const char* region_name(Region r) noexcept;

/// C1 = 2 R0 lambda I1(R0/lambda)/I0(R0/lambda) - R0^2, in m^2.
double coefficient_c1(const CylinderGeometry& geom);

/// Polar field outside the cylinder; throws DomainError if |p| < R0.
PolarField polar_field_outside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);
/// Polar field inside the cylinder; throws DomainError if |p| > R0.
PolarField polar_field_inside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);

FieldVector field_outside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);
FieldVector field_inside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);

/// Inside when |p| <= R0, outside otherwise.
FieldVector field_at(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);
Region region_of(const CylinderGeometry& geom, FieldPoint p) noexcept;

/// A_z outside, gauge C0 = 0: (r + C1/r)(B0x sin(theta) - B0y cos(theta)).
double vector_potential_outside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);
/// A_z inside: 2 lambda I1(r/lambda)/I0(R0/lambda) (B0x sin(theta) - B0y cos(theta)).
double vector_potential_inside(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);
double vector_potential_at(const CylinderGeometry& geom, BackgroundField b0, FieldPoint p);

struct FieldMapGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  std::size_t nx = 2;
  std::size_t ny = 2;

  /// Throws DomainError unless nx, ny >= 2 and the bounds are ordered.
  void validate() const;
  FieldPoint point(std::size_t ix, std::size_t iy) const noexcept;
  std::size_t size() const noexcept { return nx * ny; }
};

struct FieldSample {
  FieldPoint point;
  FieldVector field;
  Region region = Region::outside;
};

/// Row-major samples of field_at over the grid: y outer, x inner. Sampling
/// runs in parallel; the ordering never depends on the thread count.
std::vector<FieldSample> field_map(const CylinderGeometry& geom, BackgroundField b0, const FieldMapGrid& grid);

}  // namespace meissner
