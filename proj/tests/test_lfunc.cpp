#include "doctest.h"
#include "weillift/lfunc.hpp"
#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"
#include "weillift/special.hpp"

#include <cmath>

using namespace weillift;
using namespace weillift::lfunc;
using weillift::qexp::builtin_delta;
using weillift::qexp::builtin_eta6_3;

TEST_CASE("dirichlet L special values via class number formula") {
  ScopedPrecision sp(256);
  // L(1, chi_{-4}) = pi/4
  LValue l4 = dirichlet_L(-4, Complex(Real(1L)));
  Real expect = Real::pi() / 4L;
  CHECK((abs(l4.value - Complex(expect)) / expect).to_double() < 1e-40);
  // L(1, chi_{-3}) = pi/(3 sqrt 3)
  LValue l3 = dirichlet_L(-3, Complex(Real(1L)));
  Real expect3 = Real::pi() / (3L * sqrt(Real(3L)));
  CHECK((abs(l3.value - Complex(expect3)) / expect3).to_double() < 1e-40);
  // Dirichlet series cross-check at s = 3 for chi_5
  LValue l5 = dirichlet_L(5, Complex(Real(3L)));
  Real series(0L);
  for (long n = 1; n <= 4000; ++n)
    series += Real(nt::kronecker(5, n)) / (Real(n) * n * n);
  CHECK(std::abs(l5.value.re.to_double() - series.to_double()) < 1e-9);
}

TEST_CASE("completed Lambda functional equation") {
  ScopedPrecision sp(256);
  for (long D : {-3L, -4L, 5L, -7L, 8L, 12L, -40L}) {
    for (double spt : {0.3, 0.7, 1.4, -0.6, 2.2}) {
      Complex s{Real(spt), Real(0.2)};
      LValue a = completed_Lambda(D, s);
      LValue b = completed_Lambda(D, Complex(Real(1L)) - s);
      CHECK((abs(a.value - b.value) / abs(a.value)).to_double() < 1e-30);
    }
  }
  // Lambda(s) = Lambda(1-s) at s = 0.3 stated tolerance
  Complex s{Real(0.3)};
  LValue a = completed_Lambda(-7, s);
  LValue b = completed_Lambda(-7, Complex(Real(1L)) - s);
  CHECK((abs(a.value - b.value) / abs(a.value)).to_double() < 1e-10);
}

TEST_CASE("modular L for the delta function") {
  ScopedPrecision sp(192);
  auto d = builtin_delta(400);
  // converging region: direct Dirichlet series at s = 12
  LValue l12 = modular_L(d, Complex(Real(12L)));
  Real series(0L);
  for (long n = 1; n <= 300; ++n) series += Real(d.a(n)) / pow(Real(n), 12L);
  CHECK(std::abs(l12.value.re.to_double() - series.to_double()) < 1e-10);
  CHECK(l12.value.re.to_double() > 0);
  CHECK(std::abs(l12.value.im.to_double()) < 1e-20);
  // functional equation sign +1 for Delta: Lambda(k+t) = Lambda(k-t)
  CHECK(functional_equation_sign(d) == 1);
  Complex t{Real(0.7)};
  LValue lp = completed_modular_L(d, Complex(Real(6L)) + t);
  LValue lm = completed_modular_L(d, Complex(Real(6L)) - t);
  CHECK((abs(lp.value - lm.value) / abs(lp.value)).to_double() < 1e-30);
  // cutoff independence across a 2x range
  LValue c1 = modular_L(d, Complex(Real(7.3)), 1.0);
  LValue c2 = modular_L(d, Complex(Real(7.3)), 1.4142);
  LValue c3 = modular_L(d, Complex(Real(7.3)), 0.7071);
  CHECK((abs(c1.value - c2.value) / abs(c1.value)).to_double() < 1e-8);
  CHECK((abs(c1.value - c3.value) / abs(c1.value)).to_double() < 1e-8);
}

TEST_CASE("modular L for the level 3 form: sign -1 vanishing") {
  ScopedPrecision sp(192);
  auto f = builtin_eta6_3(400);
  // true Fricke -1, weight 6 (k = 3 odd): sign = (-1)^k eps = +1, L(k) need not vanish
  CHECK(functional_equation_sign(f) == 1);
  // with the sign flipped (supplied fricke +1) the AFE sign is -1 and the
  // center value cancels identically
  auto flipped = f;
  flipped.fricke = 1;
  CHECK(functional_equation_sign(flipped) == -1);
  LValue center = modular_L(flipped, Complex(Real(3L)));
  CHECK(abs(center.value).to_double() < 1e-8);
  // two-sided functional equation residual with the true sign
  Complex t{Real(0.7)};
  LValue lp = completed_modular_L(f, Complex(Real(3L)) + t);
  LValue lm = completed_modular_L(f, Complex(Real(3L)) - t);
  CHECK((abs(lp.value - lm.value) / abs(lp.value)).to_double() < 1e-8);
}

TEST_CASE("petersson norm and area") {
  ScopedPrecision sp(128);
  // area of the level-3 quadrature domain = (pi/3) [SL2(Z) : Gamma_0(3)] = (pi/3) 4
  Real area3 = gamma0_area(3);
  Real expect = Real::pi() / 3L * 4L;
  CHECK(std::abs(area3.to_double() / expect.to_double() - 1.0) < 1e-6);
  Real area1 = gamma0_area(1);
  CHECK(std::abs(area1.to_double() / (M_PI / 3) - 1.0) < 1e-6);

  auto d = builtin_delta(200);
  auto ev = [&](const Complex& z) { return qexp::evaluate_newform(d, z); };
  Real n1 = petersson_norm_sq(ev, mpq_class(12), 1, 12);
  Real n2 = petersson_norm_sq(ev, mpq_class(12), 1, 24);
  CHECK(std::abs(n1.to_double() / n2.to_double() - 1.0) < 1e-6);
  // known value ||Delta||^2 ~ 1.035e-6
  CHECK(n2.to_double() > 0.9e-6);
  CHECK(n2.to_double() < 1.2e-6);
  // scaling |c G| = |c|^2 |G|
  auto ev2 = [&](const Complex& z) { return 2L * qexp::evaluate_newform(d, z); };
  Real n3 = petersson_norm_sq(ev2, mpq_class(12), 1, 12);
  CHECK(std::abs(n3.to_double() / n1.to_double() - 4.0) < 1e-8);
}

TEST_CASE("rankin smoke: holomorphy in s, eps toggling") {
  ScopedPrecision sp(128);
  auto f = builtin_eta6_3(420);
  // flipping the supplied Fricke sign toggles identical vanishing, exactly
  auto rz = rankin_selberg_L(f, 1, 3, -11, -8, Complex(Real(0.7)));
  CHECK(rz.identically_zero);
  CHECK(rz.value.is_zero());
  // finite-difference second derivative bounded across a small strip
  double h = 0.25;
  Complex v0 = rankin_selberg_L(f, 1, 3, -11, -8, Complex(Real(0.5)), 1, 1e-8).value;
  Complex v1 = rankin_selberg_L(f, 1, 3, -11, -8, Complex(Real(0.75)), 1, 1e-8).value;
  Complex v2 = rankin_selberg_L(f, 1, 3, -11, -8, Complex(Real(1.0)), 1, 1e-8).value;
  double second = abs(v2 - 2L * v1 + v0).to_double() / (h * h);
  CHECK(std::isfinite(second));
  CHECK(second < 1e3);
}

TEST_CASE("petersson norm, half-integral weight") {
  ScopedPrecision sp(96);
  // |eta|^2 y^{1/2} is SL2(Z)-invariant; the quadrature must self-converge
  auto ev = [](const Complex& z) { return qexp::eta(z); };
  Real n1 = petersson_norm_sq(ev, mpq_class(1, 2), 1, 10);
  Real n2 = petersson_norm_sq(ev, mpq_class(1, 2), 1, 20);
  CHECK(std::abs(n1.to_double() / n2.to_double() - 1.0) < 1e-6);
  CHECK(n2.to_double() > 0);
}

TEST_CASE("rankin constants") {
  ScopedPrecision sp(160);
  auto f = builtin_eta6_3(300);
  // delta_1 = 1
  CHECK(abs(delta_d(f, 1, Complex(Real(0.4))) - Complex(Real(1L))).to_double() == 0.0);
  // C_k at s = 0: Gamma(s/2+1) = 1, Gamma(k+s)/Gamma(1+s) = (k-1)!
  long k = 3;
  Complex c0 = C_k(k, Complex(Real(1e-40)));
  mpq_class b = qexp::binom_q(mpq_class(-3, 2), 1);
  Real expect = Real(b) * pow2(3 - 9) * pow(Real::pi(), Real(-3.5)) * 2L;  // (k-1)! = 2
  CHECK(std::abs(c0.re.to_double() / expect.to_double() - 1.0) < 1e-20);
  // gamma_p0 at a(p) = 0, s -> 0: ((1+1/p) - (3+1/p) + 2p)/((p-1)(1-1/p))
  auto g = builtin_delta(50);  // a-values irrelevant; use explicit formula check
  // direct substitution oracle with p = 5, a(5) of the level-3 form
  long p = 5;
  Complex s{Real(1e-30)};
  Complex got = gamma_p0(f, p, s);
  double ap = f.a(5).get_d();
  double den = (p - 1) * (1.0 - 1.0 / p);
  double expect0 = -std::pow(5.0, -3) / (1.0 - 1.0 / 5) * ap +
                   ((1 + 0.2) - (3 + 0.2) + 10.0) / den;
  CHECK(std::abs(got.re.to_double() - expect0) < 1e-12);
  (void)g;
}
