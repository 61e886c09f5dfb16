#pragma once

#include "meissner/constants.hpp"
#include "meissner/field.hpp"

// First-order expansion of the expelled exterior field (lambda -> 0) about an
// atom anchor point (x0, y0), and the horizontal accelerations the resulting
// gradient exerts on an atom with a scalar magnetic-moment coupling.

namespace meissner {

struct AnchorPoint {
  double x0 = 0.0;
  double y0 = 0.0;

  double radius() const noexcept { return std::hypot(x0, y0); }
  FieldPoint point() const noexcept { return {x0, y0}; }
};

/// Dimensionless gradient coefficients gamma_1..gamma_4.
struct GammaCoefficients {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double g4 = 0.0;
};

/// Which cross-term coefficients to use.
///
/// `closed_form` reproduces the published closed form. Its gamma_3, gamma_4
/// and the constant x0*y0 term are each half of what a Taylor expansion of
/// the exact exterior field gives (the exact cross term carries
/// sin(2 theta) = 2xy/r^2). `exact_gradient` doubles those three terms so
/// that the linearized field is the true first-order expansion.
enum class GammaConvention { closed_form, exact_gradient };

enum class MomentSign { positive = 1, negative = -1 };

struct AtomParams {
  double mass = constants::rb87_mass;         // kg
  double moment = constants::bohr_magneton;   // J/T, magnitude
  MomentSign sign = MomentSign::positive;

  /// Throws DomainError unless mass > 0 and moment > 0.
  void validate() const;
  double signed_moment() const noexcept { return static_cast<int>(sign) * moment; }
};

/// Throws DomainError when the anchor is not strictly outside the cylinder.
GammaCoefficients gamma_coefficients(const CylinderGeometry& geom, AnchorPoint anchor,
                                     GammaConvention convention = GammaConvention::closed_form);

/// Linearized field at anchor + offset (offset components in metres).
FieldVector linearized_field(const CylinderGeometry& geom, BackgroundField b0, AnchorPoint anchor,
                             FieldPoint offset, GammaConvention convention = GammaConvention::closed_form);

struct HorizontalAcceleration {
  double gx = 0.0;  // m/s^2
  double gy = 0.0;  // m/s^2
};

/// g_x = (mu/(m R0)) [(g1 - g3) B0x - (g1 + g3) B0y]
/// g_y = (mu/(m R0)) [(g2 - g4) B0x - (g2 + g4) B0y]
HorizontalAcceleration induced_accelerations(const CylinderGeometry& geom, BackgroundField b0, AnchorPoint anchor,
                                             const AtomParams& atom,
                                             GammaConvention convention = GammaConvention::closed_form);

/// Same map with the gammas supplied directly.
HorizontalAcceleration induced_accelerations(const GammaCoefficients& gammas, BackgroundField b0,
                                             const AtomParams& atom, double r0);

}  // namespace meissner
