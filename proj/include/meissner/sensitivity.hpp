#pragma once

#include <array>
#include <string>
#include <vector>

#include "meissner/field.hpp"
#include "meissner/linearized.hpp"

// Inversion of the acceleration map (B0x, B0y) -> (gx, gy) and propagation of
// acceleration uncertainties into background-field uncertainties.

namespace meissner {

struct AccelerationUncertainty {
  double dgx = 0.0;  // m/s^2, 1 sigma
  double dgy = 0.0;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// M = (mu/(m R0)) [[g1 - g3, -(g1 + g3)], [g2 - g4, -(g2 + g4)]], so that
/// (gx, gy) = M (B0x, B0y).
Matrix2 acceleration_matrix(const GammaCoefficients& gammas, const AtomParams& atom, double r0);

/// 2-norm condition number of a 2x2 matrix (ratio of singular values).
double condition_number(const Matrix2& m);

/// Thresholds on the inversion. Condition numbers above `warn_condition`
/// produce a warning, above `max_condition` an error. Separately, the
/// condition number of M is invariant under uniform scaling of the gammas,
/// so an anchor far from the cylinder is caught by `min_gradient`: if
/// max |gamma_i| falls below it the gradient signal is considered lost.
struct InversionLimits {
  double warn_condition = 1e6;
  double max_condition = 1e12;
  double min_gradient = 1e-5;
};

/// Solves M (B0x, B0y) = (gx, gy). Throws DegenerateGeometryError when
/// |det M| <= 1e-15 ||M||_F^2 or the limits above are violated.
BackgroundField acceleration_to_field(HorizontalAcceleration g, const GammaCoefficients& gammas,
                                      const AtomParams& atom, const CylinderGeometry& geom,
                                      const InversionLimits& limits = {});

struct FieldUncertainty {
  double db0x = 0.0;  // T
  double db0y = 0.0;  // T
};

/// Signed first-order propagation in its closed form:
///   dB0y = m R0 [dgy (g1 - g3) - dgx (g2 - g4)] / (2 mu (g2 g3 - g1 g4))
///   dB0x = m R0 dgx / (mu (g1 - g3)) + (g1 + g3) dB0y / (g1 - g3)
/// Values may be negative; callers wanting a magnitude take |.|.
FieldUncertainty field_uncertainty(AccelerationUncertainty dg, const GammaCoefficients& gammas,
                                   const AtomParams& atom, const CylinderGeometry& geom,
                                   const InversionLimits& limits = {});

/// Independent routes through M^-1: signed (M^-1 dg), worst case (|M^-1| dg)
/// and root-sum-square.
FieldUncertainty propagate_linear(AccelerationUncertainty dg, const Matrix2& m);
FieldUncertainty propagate_worst_case(AccelerationUncertainty dg, const Matrix2& m);
FieldUncertainty propagate_quadrature(AccelerationUncertainty dg, const Matrix2& m);

struct SensitivityReport {
  AnchorPoint anchor;
  double r0 = 0.0;
  double lambda = 0.0;
  GammaCoefficients gammas;
  HorizontalAcceleration accelerations;
  AccelerationUncertainty dg;
  double b0x_est = 0.0;
  double b0y_est = 0.0;
  double db0x = 0.0;  // |closed-form propagation|
  double db0y = 0.0;
  double db0x_quadrature = 0.0;
  double db0y_quadrature = 0.0;
  double condition_number = 1.0;
  std::vector<std::string> warnings;
};

SensitivityReport sensitivity_report(const CylinderGeometry& geom, AnchorPoint anchor, const AtomParams& atom,
                                     BackgroundField b0, AccelerationUncertainty dg,
                                     const InversionLimits& limits = {},
                                     GammaConvention convention = GammaConvention::closed_form);

}  // namespace meissner
