#include "meissner/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meissner/error.hpp"

namespace meissner {
namespace {

double frobenius_squared(const Matrix2& m) {
  return m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
}

double determinant(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Matrix2 inverse(const Matrix2& m) {
  const double det = determinant(m);
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

double max_gamma(const GammaCoefficients& g) {
  return std::max({std::abs(g.g1), std::abs(g.g2), std::abs(g.g3), std::abs(g.g4)});
}

// Throws when the inversion cannot be trusted for this anchor.
void check_invertible(const Matrix2& m, const GammaCoefficients& g, const InversionLimits& limits) {
  const double det = determinant(m);
  const double kappa = condition_number(m);
  if (!(std::abs(det) > 1e-15 * frobenius_squared(m)) || kappa > limits.max_condition) {
    std::ostringstream msg;
    msg << "degenerate anchor geometry: acceleration map is singular (condition number " << kappa
        << "); move the anchor point";
    throw DegenerateGeometryError(msg.str());
  }
  if (max_gamma(g) < limits.min_gradient) {
    std::ostringstream msg;
    msg << "degenerate anchor geometry: gradient coefficients vanish (max |gamma| = " << max_gamma(g)
        << " < " << limits.min_gradient << "); the anchor point is too far from the cylinder";
    throw DegenerateGeometryError(msg.str());
  }
}

}  // namespace

Matrix2 acceleration_matrix(const GammaCoefficients& g, const AtomParams& atom, double r0) {
  atom.validate();
  const double c = atom.signed_moment() / (atom.mass * r0);
  return {{{c * (g.g1 - g.g3), -c * (g.g1 + g.g3)}, {c * (g.g2 - g.g4), -c * (g.g2 + g.g4)}}};
}

double condition_number(const Matrix2& m) {
  const double det = std::abs(determinant(m));
  if (det == 0.0) return std::numeric_limits<double>::infinity();
  const double f = frobenius_squared(m);
  const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
  const double s_max2 = 0.5 * (f + disc);
  return s_max2 / det;
}

BackgroundField acceleration_to_field(HorizontalAcceleration g, const GammaCoefficients& gammas,
                                      const AtomParams& atom, const CylinderGeometry& geom,
                                      const InversionLimits& limits) {
  const auto m = acceleration_matrix(gammas, atom, geom.r0());
  check_invertible(m, gammas, limits);
  const auto inv = inverse(m);
  return {inv[0][0] * g.gx + inv[0][1] * g.gy, inv[1][0] * g.gx + inv[1][1] * g.gy};
}

FieldUncertainty field_uncertainty(AccelerationUncertainty dg, const GammaCoefficients& g, const AtomParams& atom,
                                   const CylinderGeometry& geom, const InversionLimits& limits) {
  if (!(dg.dgx >= 0.0) || !(dg.dgy >= 0.0)) throw DomainError("acceleration uncertainties must be >= 0");
  check_invertible(acceleration_matrix(g, atom, geom.r0()), g, limits);
  const double mr = atom.mass * geom.r0();
  const double mu = atom.signed_moment();
  const double a = g.g1 - g.g3;
  const double p = g.g2 - g.g4;
  const double mixed = g.g2 * g.g3 - g.g1 * g.g4;
  const double numerator = dg.dgy * a - dg.dgx * p;
  const double db0y = mr * numerator / (2.0 * mu * mixed);
  const double db0x = mr * dg.dgx / (mu * a) + mr * (g.g1 + g.g3) * numerator / (2.0 * mu * mixed * a);
  return {db0x, db0y};
}

FieldUncertainty propagate_linear(AccelerationUncertainty dg, const Matrix2& m) {
  const auto inv = inverse(m);
  return {inv[0][0] * dg.dgx + inv[0][1] * dg.dgy, inv[1][0] * dg.dgx + inv[1][1] * dg.dgy};
}

FieldUncertainty propagate_worst_case(AccelerationUncertainty dg, const Matrix2& m) {
  const auto inv = inverse(m);
  return {std::abs(inv[0][0]) * dg.dgx + std::abs(inv[0][1]) * dg.dgy,
          std::abs(inv[1][0]) * dg.dgx + std::abs(inv[1][1]) * dg.dgy};
}

FieldUncertainty propagate_quadrature(AccelerationUncertainty dg, const Matrix2& m) {
  const auto inv = inverse(m);
  return {std::hypot(inv[0][0] * dg.dgx, inv[0][1] * dg.dgy), std::hypot(inv[1][0] * dg.dgx, inv[1][1] * dg.dgy)};
}

SensitivityReport sensitivity_report(const CylinderGeometry& geom, AnchorPoint anchor, const AtomParams& atom,
                                     BackgroundField b0, AccelerationUncertainty dg, const InversionLimits& limits,
                                     GammaConvention convention) {
  SensitivityReport rep;
  rep.anchor = anchor;
  rep.r0 = geom.r0();
  rep.lambda = geom.lambda();
  rep.gammas = gamma_coefficients(geom, anchor, convention);
  rep.accelerations = induced_accelerations(rep.gammas, b0, atom, geom.r0());
  rep.dg = dg;

  const auto m = acceleration_matrix(rep.gammas, atom, geom.r0());
  rep.condition_number = condition_number(m);
  if (rep.condition_number > limits.warn_condition) {
    std::ostringstream msg;
    msg << "acceleration map is ill-conditioned (condition number " << rep.condition_number << ")";
    rep.warnings.push_back(msg.str());
  }

  const auto est = acceleration_to_field(rep.accelerations, rep.gammas, atom, geom, limits);
  rep.b0x_est = est.b0x;
  rep.b0y_est = est.b0y;

  const auto closed = field_uncertainty(dg, rep.gammas, atom, geom, limits);
  rep.db0x = std::abs(closed.db0x);
  rep.db0y = std::abs(closed.db0y);
  const auto rss = propagate_quadrature(dg, m);
  rep.db0x_quadrature = rss.db0x;
  rep.db0y_quadrature = rss.db0y;
  return rep;
}

}  // namespace meissner
