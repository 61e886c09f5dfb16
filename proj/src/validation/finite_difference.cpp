#include "meissner/error.hpp"
#include "meissner/validation.hpp"

namespace meissner::validation {
namespace {

void require_same_side(const CylinderGeometry& geom, FieldPoint p, double h) {
  const Region home = region_of(geom, p);
  const FieldPoint stencil[] = {{p.x + h, p.y}, {p.x - h, p.y}, {p.x, p.y + h}, {p.x, p.y - h}};
  for (const auto& q : stencil)
    if (region_of(geom, q) != home) throw DomainError("finite-difference stencil crosses the superconductor surface");
}

void require_step(double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
}

}  // namespace

Jacobian finite_difference_jacobian(const VectorFieldFn& fn, FieldPoint p, double h,
                                    const std::optional<CylinderGeometry>& surface) {
  require_step(h);
  if (surface) require_same_side(*surface, p, h);
  const FieldVector dx = (0.5 / h) * (fn({p.x + h, p.y}) - fn({p.x - h, p.y}));
  const FieldVector dy = (0.5 / h) * (fn({p.x, p.y + h}) - fn({p.x, p.y - h}));
  return {{{dx.bx, dy.bx}, {dx.by, dy.by}}};
}

double finite_difference_laplacian(const ScalarFieldFn& fn, FieldPoint p, double h) {
  require_step(h);
  return (fn({p.x + h, p.y}) + fn({p.x - h, p.y}) + fn({p.x, p.y + h}) + fn({p.x, p.y - h}) - 4.0 * fn(p)) / (h * h);
}

FieldVector finite_difference_laplacian(const VectorFieldFn& fn, FieldPoint p, double h) {
  require_step(h);
  const FieldVector sum = fn({p.x + h, p.y}) + fn({p.x - h, p.y}) + fn({p.x, p.y + h}) + fn({p.x, p.y - h});
  return (1.0 / (h * h)) * (sum - 4.0 * fn(p));
}

double finite_difference_divergence(const VectorFieldFn& fn, FieldPoint p, double h) {
  const Jacobian j = finite_difference_jacobian(fn, p, h);
  return j[0][0] + j[1][1];
}

double finite_difference_curl(const VectorFieldFn& fn, FieldPoint p, double h) {
  const Jacobian j = finite_difference_jacobian(fn, p, h);
  return j[1][0] - j[0][1];
}

}  // namespace meissner::validation
