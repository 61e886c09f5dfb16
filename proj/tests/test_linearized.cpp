#include <doctest.h>

#include <cmath>
#include <random>

#include "meissner/error.hpp"
#include "meissner/linearized.hpp"
#include "meissner/validation.hpp"

using namespace meissner;

namespace {

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Perfect diamagnet: A_z = (r - R0^2/r)(B0x sin - B0y cos), curl written by hand.
FieldVector diamagnet(double r0, BackgroundField b0, FieldPoint p) {
  const double r = p.radius();
  const double t = std::atan2(p.y, p.x);
  const double q = r0 * r0 / (r * r);
  const double br = (1 - q) * (b0.b0x * std::cos(t) + b0.b0y * std::sin(t));
  const double bt = -(1 + q) * (b0.b0x * std::sin(t) - b0.b0y * std::cos(t));
  return {br * std::cos(t) - bt * std::sin(t), br * std::sin(t) + bt * std::cos(t)};
}

const CylinderGeometry reference(0.01, 1e-4);
const BackgroundField earth{5e-5, 5e-5};
const AnchorPoint anchor22{0.02, 0.02};

AtomParams light_atom() {
  AtomParams a;
  a.mass = 1e-25;
  return a;
}

}  // namespace

TEST_CASE("gamma coefficients at the reference anchor") {
  const auto g = gamma_coefficients(reference, anchor22);
  CHECK(g.g1 == doctest::Approx(-0.0625).epsilon(1e-14));
  CHECK(g.g2 == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(g.g3 == doctest::Approx(-0.03125).epsilon(1e-14));
  CHECK(g.g4 == doctest::Approx(-0.03125).epsilon(1e-14));

  const auto e = gamma_coefficients(reference, anchor22, GammaConvention::exact_gradient);
  CHECK(e.g1 == doctest::Approx(g.g1).epsilon(1e-14));
  CHECK(e.g2 == doctest::Approx(g.g2).epsilon(1e-14));
  CHECK(e.g3 == doctest::Approx(2 * g.g3).epsilon(1e-14));
  CHECK(e.g4 == doctest::Approx(2 * g.g4).epsilon(1e-14));
}

TEST_CASE("gammas independent of lambda") {
  const auto a = gamma_coefficients(reference, anchor22);
  const auto b = gamma_coefficients(CylinderGeometry(0.01, 0.01), anchor22);
  CHECK(a.g1 == b.g1);
  CHECK(a.g3 == b.g3);
}

TEST_CASE("anchor on an axis loses half the gammas") {
  for (const AnchorPoint a : {AnchorPoint{0.03, 0.0}, AnchorPoint{-0.04, 0.0}}) {
    const auto g = gamma_coefficients(reference, a);
    CHECK(g.g2 == 0.0);
    CHECK(g.g3 == 0.0);
    CHECK(g.g1 != 0.0);
  }
  const auto g = gamma_coefficients(reference, {0.0, -0.025});
  CHECK(g.g1 == 0.0);
  CHECK(g.g4 == 0.0);
}

TEST_CASE("gammas are invariant under joint scaling of R0 and anchor") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> s(0.1, 10.0);
  for (int i = 0; i < 20; ++i) {
    double x = u(rng), y = u(rng);
    if (std::hypot(x, y) < 1.2) x += 2.0;
    const double k = s(rng);
    const auto a = gamma_coefficients(CylinderGeometry(0.01, 1e-4), {0.01 * x, 0.01 * y});
    const auto b = gamma_coefficients(CylinderGeometry(0.01 * k, 1e-4 * k), {0.01 * k * x, 0.01 * k * y});
    CHECK(rel(a.g1, b.g1) < 1e-12);
    CHECK(rel(a.g2, b.g2) < 1e-12);
    CHECK(std::abs(a.g3 - b.g3) < 1e-12 * std::abs(a.g1));
    CHECK(std::abs(a.g4 - b.g4) < 1e-12 * std::abs(a.g1));
  }
}

TEST_CASE("gammas decay as the inverse cube of the distance") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int i = 0; i < 20; ++i) {
    const double t = angle(rng);
    const auto near = gamma_coefficients(reference, {0.02 * std::cos(t), 0.02 * std::sin(t)});
    const auto far = gamma_coefficients(reference, {0.04 * std::cos(t), 0.04 * std::sin(t)});
    const double n = std::max({std::abs(near.g1), std::abs(near.g2), std::abs(near.g3), std::abs(near.g4)});
    const double f = std::max({std::abs(far.g1), std::abs(far.g2), std::abs(far.g3), std::abs(far.g4)});
    CHECK(f <= n / 8.0 * (1 + 1e-12));
  }
}

TEST_CASE("anchor inside the cylinder is rejected") {
  CHECK_THROWS_AS(gamma_coefficients(reference, {0.005, 0.0}), DomainError);
  CHECK_THROWS_AS(linearized_field(reference, earth, {0.0, 0.0}, {0, 0}), DomainError);
}

TEST_CASE("linearized field at zero offset equals the exact thin-layer field") {
  const CylinderGeometry thin(0.01, 1e-11);
  const auto exact = field_outside(thin, earth, anchor22.point());
  const auto lin = linearized_field(reference, earth, anchor22, {0, 0}, GammaConvention::exact_gradient);
  CHECK((lin - exact).magnitude() <= 1e-6 * exact.magnitude());

  // The published form halves the constant cross term, so it only agrees on an axis.
  const auto closed = linearized_field(reference, earth, anchor22, {0, 0});
  CHECK((closed - exact).magnitude() > 1e-2 * exact.magnitude());
  const AnchorPoint axis{0.025, 0.0};
  const auto on_axis = field_outside(thin, earth, axis.point());
  CHECK((linearized_field(reference, earth, axis, {0, 0}) - on_axis).magnitude() <= 1e-6 * on_axis.magnitude());
}

TEST_CASE("linearized field error is second order in the offset") {
  const double r0 = reference.r0();
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int i = 0; i < 5; ++i) {
    const double t = angle(rng);
    const AnchorPoint a{0.025 * std::cos(t), 0.025 * std::sin(t)};
    const auto residual = [&](double d) {
      const FieldPoint off{d, 0.3 * d};
      const auto exact = diamagnet(r0, earth, {a.x0 + off.x, a.y0 + off.y});
      return (linearized_field(reference, earth, a, off, GammaConvention::exact_gradient) - exact).magnitude();
    };
    const double e1 = residual(1e-2 * r0);
    const double e2 = residual(0.5e-2 * r0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
  }
}

TEST_CASE("exact-gradient gammas match the finite-difference Jacobian") {
  const double r0 = reference.r0();
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> radius(1.5, 4.0);
  for (int i = 0; i < 20; ++i) {
    const double t = angle(rng), rr = radius(rng) * r0;
    const AnchorPoint a{rr * std::cos(t), rr * std::sin(t)};
    const auto g = gamma_coefficients(reference, a, GammaConvention::exact_gradient);
    // Unit background along x then along y pulls the four gammas apart.
    const auto jx = validation::finite_difference_jacobian(
        [&](FieldPoint p) { return diamagnet(r0, {1, 0}, p); }, a.point(), 1e-5 * r0);
    const auto jy = validation::finite_difference_jacobian(
        [&](FieldPoint p) { return diamagnet(r0, {0, 1}, p); }, a.point(), 1e-5 * r0);
    const double scale = std::max({std::abs(g.g1), std::abs(g.g2), std::abs(g.g3), std::abs(g.g4)});
    CHECK(std::abs(jx[0][0] * r0 - g.g1) < 1e-6 * scale);
    CHECK(std::abs(jx[0][1] * r0 - g.g2) < 1e-6 * scale);
    CHECK(std::abs(jx[1][0] * r0 + g.g3) < 1e-6 * scale);
    CHECK(std::abs(jx[1][1] * r0 + g.g4) < 1e-6 * scale);
    CHECK(std::abs(jy[0][0] * r0 + g.g3) < 1e-6 * scale);
    CHECK(std::abs(jy[0][1] * r0 + g.g4) < 1e-6 * scale);
    CHECK(std::abs(jy[1][0] * r0 + g.g1) < 1e-6 * scale);
    CHECK(std::abs(jy[1][1] * r0 + g.g2) < 1e-6 * scale);
  }
}

TEST_CASE("closed-form cross gammas are half the numerical gradient") {
  const double r0 = reference.r0();
  const auto g = gamma_coefficients(reference, anchor22);
  const auto jx = validation::finite_difference_jacobian([&](FieldPoint p) { return diamagnet(r0, {1, 0}, p); },
                                                         anchor22.point(), 1e-5 * r0);
  CHECK(jx[1][0] * r0 == doctest::Approx(-2 * g.g3).epsilon(1e-6));
  CHECK(jx[1][1] * r0 == doctest::Approx(-2 * g.g4).epsilon(1e-6));
}

TEST_CASE("induced accelerations at the reference point") {
  const auto g = induced_accelerations(reference, earth, anchor22, light_atom());
  // mu_B / (m R0) * |B0x| * [(g1 - g3) - (g1 + g3)] with the gammas above
  const double expected = 9.2740100783e-24 / (1e-25 * 0.01) * 5e-5 * 0.0625;
  CHECK(g.gx == doctest::Approx(expected).epsilon(1e-13));
  CHECK(g.gy == doctest::Approx(expected).epsilon(1e-13));
  CHECK(g.gx == doctest::Approx(2.90e-2).epsilon(1e-2));
}

TEST_CASE("accelerations are linear in moment and background") {
  auto atom = light_atom();
  const auto base = induced_accelerations(reference, earth, anchor22, atom);
  atom.moment *= 3;
  const auto tripled = induced_accelerations(reference, earth, anchor22, atom);
  CHECK(tripled.gx == doctest::Approx(3 * base.gx).epsilon(1e-14));
  atom = light_atom();
  atom.sign = MomentSign::negative;
  CHECK(induced_accelerations(reference, earth, anchor22, atom).gy == doctest::Approx(-base.gy).epsilon(1e-14));

  const auto zero = induced_accelerations(reference, {0, 0}, anchor22, light_atom());
  CHECK(zero.gx == 0.0);
  CHECK(zero.gy == 0.0);

  const BackgroundField b1{2e-5, -1e-5}, b2{-3e-5, 4e-5};
  const auto g1 = induced_accelerations(reference, b1, anchor22, light_atom());
  const auto g2 = induced_accelerations(reference, b2, anchor22, light_atom());
  const auto g12 = induced_accelerations(reference, {b1.b0x + b2.b0x, b1.b0y + b2.b0y}, anchor22, light_atom());
  CHECK(g12.gx == doctest::Approx(g1.gx + g2.gx).epsilon(1e-12));
  CHECK(g12.gy == doctest::Approx(g1.gy + g2.gy).epsilon(1e-12));
}

TEST_CASE("atom parameters are validated") {
  AtomParams a;
  a.mass = 0;
  CHECK_THROWS_AS(a.validate(), DomainError);
  a = AtomParams{};
  a.moment = -1;
  CHECK_THROWS_AS(induced_accelerations(reference, earth, anchor22, a), DomainError);
}
