#include "meissner/linearized.hpp"

#include <cmath>

#include "meissner/error.hpp"

namespace meissner {
namespace {

void require_anchor_outside(const CylinderGeometry& geom, AnchorPoint a) {
  if (!std::isfinite(a.x0) || !std::isfinite(a.y0)) throw DomainError("anchor coordinates must be finite");
  if (!(a.radius() > geom.r0())) throw DomainError("anchor point must lie outside the superconducting cylinder");
}

double cross_factor(GammaConvention c) noexcept { return c == GammaConvention::exact_gradient ? 2.0 : 1.0; }

}  // namespace

void AtomParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("atom mass must be positive");
  if (!(moment > 0.0) || !std::isfinite(moment)) throw DomainError("magnetic moment magnitude must be positive");
}

GammaCoefficients gamma_coefficients(const CylinderGeometry& geom, AnchorPoint anchor, GammaConvention convention) {
  require_anchor_outside(geom, anchor);
  const double x = anchor.x0;
  const double y = anchor.y0;
  const double r2 = x * x + y * y;
  const double r0 = geom.r0();
  const double scale = r0 * r0 * r0 / (r2 * r2);
  const double anisotropy = (y * y - x * x) / r2;
  const double cross = cross_factor(convention);
  return {
      -2.0 * scale * x * (1.0 + 2.0 * anisotropy),
      2.0 * scale * y * (1.0 - 2.0 * anisotropy),
      cross * scale * y * (1.0 - 4.0 * x * x / r2),
      cross * scale * x * (1.0 - 4.0 * y * y / r2),
  };
}

FieldVector linearized_field(const CylinderGeometry& geom, BackgroundField b0, AnchorPoint anchor,
                             FieldPoint offset, GammaConvention convention) {
  const auto g = gamma_coefficients(geom, anchor, convention);
  const double r0 = geom.r0();
  const double x = anchor.x0;
  const double y = anchor.y0;
  const double r2 = x * x + y * y;
  const double r4 = r2 * r2;
  const double u = offset.x / r0;
  const double v = offset.y / r0;
  const double diagonal = (y * y - x * x) / r4 * r0 * r0;
  const double cross = cross_factor(convention) * x * y / r4 * r0 * r0;
  return {
      (1.0 + diagonal + u * g.g1 + v * g.g2) * b0.b0x - (cross + u * g.g3 + v * g.g4) * b0.b0y,
      (1.0 - diagonal - u * g.g1 - v * g.g2) * b0.b0y - (cross + u * g.g3 + v * g.g4) * b0.b0x,
  };
}

HorizontalAcceleration induced_accelerations(const GammaCoefficients& g, BackgroundField b0, const AtomParams& atom,
                                             double r0) {
  atom.validate();
  const double coupling = atom.signed_moment() / (atom.mass * r0);
  return {
      coupling * ((g.g1 - g.g3) * b0.b0x - (g.g1 + g.g3) * b0.b0y),
      coupling * ((g.g2 - g.g4) * b0.b0x - (g.g2 + g.g4) * b0.b0y),
  };
}

HorizontalAcceleration induced_accelerations(const CylinderGeometry& geom, BackgroundField b0, AnchorPoint anchor,
                                             const AtomParams& atom, GammaConvention convention) {
  return induced_accelerations(gamma_coefficients(geom, anchor, convention), b0, atom, geom.r0());
}

}  // namespace meissner
