#include "doctest.h"
#include "weillift/forms.hpp"
#include "weillift/errors.hpp"
#include "weillift/special.hpp"

#include <cmath>
#include <random>

using namespace weillift;
using namespace weillift::qexp;

namespace {

double rel_err(const Complex& a, const Complex& b) {
  return (abs(a - b) / abs(b)).to_double();
}

std::array<long, 4> random_gamma0(std::mt19937_64& rng, long N) {
  std::uniform_int_distribution<long> d(-3, 3);
  // products of T^a and [[1,0],[N,1]]^b stay in Gamma_0(N)
  long a = 1, b = 0, c = 0, dd = 1;
  for (int i = 0; i < 4; ++i) {
    long t = d(rng);
    // right-multiply by T^t then by L^s
    a = a;
    b = a * t + b;
    c = c;
    dd = c * t + dd;
    long s = d(rng) * N;
    a = a + b * s;
    c = c + dd * s;
  }
  return {a, b, c, dd};
}

}  // namespace

TEST_CASE("eta special value and transformation") {
  ScopedPrecision sp(256);
  // eta(i) = Gamma(1/4) / (2 pi^{3/4})
  Complex ei = eta(Complex::i());
  Real expect = gamma(Real(0.25)) / (2L * pow(Real::pi(), Real(0.75)));
  CHECK(std::abs(ei.re.to_double() - expect.to_double()) < 1e-70);
  CHECK(std::abs(ei.im.to_double()) < 1e-70);
  CHECK(std::abs(ei.re.to_double() - 0.768225422326057) < 1e-14);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-0.9, 0.9), uy(0.1, 2.2);
  for (int t = 0; t < 6; ++t) {
    Complex tau{Real(ux(rng)), Real(uy(rng))};
    // eta(tau+1) = e(1/24) eta(tau)
    Complex lhs = eta(tau + Complex(Real(1L)));
    Complex rhs = e2pi(mpq_class(1, 24)) * eta(tau);
    CHECK(rel_err(lhs, rhs) < 1e-70);
    // eta(-1/tau) = sqrt(-i tau) eta(tau)
    Complex inv = eta(Complex(Real(-1L)) / tau);
    Complex fac = sqrt(Complex(tau.im, -tau.re)) * eta(tau);  // -i tau = y - i x
    CHECK(rel_err(inv, fac) < 1e-70);
  }
  // q-expansion of eta matches evaluation
  auto eq = eta_qexp(24 * 30);
  Complex tau{Real(0.13), Real(1.4)};
  CHECK(rel_err(eq.eval_direct(tau), eta(tau)) < 1e-60);
}

TEST_CASE("hauptmodul expansions") {
  auto p3 = hauptmodul_qexp(3, 6);
  CHECK(p3.n0() == -1);
  CHECK(p3.coeff(-1) == 1);
  CHECK(p3.coeff(0) == -12);
  CHECK(p3.coeff(1) == 54);
  CHECK(p3.coeff(2) == -76);
  for (long N : {5L, 7L, 13L}) {
    auto p = hauptmodul_qexp(N, 4);
    CHECK(p.n0() == -1);
    CHECK(p.coeff(-1) == 1);
  }
  CHECK_THROWS_AS(hauptmodul_qexp(11, 4), validation_error);

  // numeric modularity under random Gamma_0(N) elements
  ScopedPrecision sp(192);
  std::mt19937_64 rng(11);
  for (long N : {3L, 5L, 7L, 13L}) {
    Complex tau{Real(0.21), Real(0.8)};
    Complex base = hauptmodul_eval(N, tau);
    for (int t = 0; t < 4; ++t) {
      auto g = random_gamma0(rng, N);
      Complex num = Complex(Real(g[0])) * tau + Complex(Real(g[1]));
      Complex den = Complex(Real(g[2])) * tau + Complex(Real(g[3]));
      Complex moved = hauptmodul_eval(N, num / den);
      CHECK((abs(moved - base) / abs(base)).to_double() < 1e-10);
    }
  }
  // expansion matches evaluation high in the upper half plane
  Complex tau{Real(0.05), Real(2.1)};
  auto p5 = hauptmodul_qexp(5, 40);
  CHECK(rel_err(p5.eval_direct(tau), hauptmodul_eval(5, tau)) < 1e-40);
}

TEST_CASE("builtin newforms") {
  auto d = builtin_delta(220);
  d.check_eigenvalues(200);
  CHECK(d.a(2) == -24);
  CHECK(*d.fricke == 1);
  auto f3 = builtin_eta6_3(220);
  f3.check_eigenvalues(200);
  CHECK(f3.level == 3);
  CHECK(f3.weight == 6);
  CHECK(f3.a(1) == 1);
  CHECK(f3.a(2) == -6);
  CHECK(f3.a(3) == 9);   // a(p) = -eps p^{k-1} for p || N
  CHECK(f3.a(4) == 4);
  // Fricke eigenvalue: eta(z)^6 eta(3z)^6 picks up (-i)^6 = -1 under W_3
  CHECK(*f3.fricke == -1);
  // a(3)^2 = 3^{2k-2}
  CHECK(f3.a(3) * f3.a(3) == 81);
  // eps^2 = 1 sanity through the numeric route
  double resid = 0;
  int eps = fricke_eigenvalue(f3, &resid);
  CHECK(eps * eps == 1);
  CHECK(resid < 1e-6);
}

TEST_CASE("evaluate: consistency and modularity") {
  ScopedPrecision sp(192);
  auto d = builtin_delta(160);
  // evaluate(Delta, i) = eta(i)^24
  Complex di = evaluate_newform(d, Complex::i());
  Complex e24 = pow(eta(Complex::i()), 24);
  CHECK(rel_err(di, e24) < 1e-50);
  // against direct series high up
  Complex tau{Real(0.31), Real(2.7)};
  CHECK(rel_err(evaluate_newform(d, tau), d.expansion(60).eval_direct(tau)) < 1e-45);

  // q-series route (no eta): modularity residual at level 3
  auto f3 = builtin_eta6_3(400);
  Newform fq = f3;
  fq.eta.reset();  // force the reduction + series route
  std::mt19937_64 rng(23);
  Complex base_tau{Real(0.17), Real(0.35)};
  Complex via_eta = evaluate_newform(f3, base_tau);
  Complex via_series = evaluate_newform(fq, base_tau);
  CHECK(rel_err(via_series, via_eta) < 1e-8);
  for (int t = 0; t < 10; ++t) {
    auto g = random_gamma0(rng, 3);
    Complex num = Complex(Real(g[0])) * base_tau + Complex(Real(g[1]));
    Complex den = Complex(Real(g[2])) * base_tau + Complex(Real(g[3]));
    Complex moved = evaluate_newform(fq, num / den);
    Complex expect = pow(den, 6) * via_eta;
    CHECK(rel_err(moved, expect) < 1e-8);
  }
  // deep point near the zero cusp exercises the Fricke route
  Complex low{Real(0.001), Real(0.004)};
  CHECK(rel_err(evaluate_newform(fq, low), evaluate_newform(f3, low)) < 1e-7);
}

TEST_CASE("trace operator") {
  ScopedPrecision sp(160);
  auto f3 = builtin_eta6_3(200);
  // N' = N is the identity
  auto idtr = trace_down([&](const Complex& z) { return evaluate_newform(f3, z); }, 6, 3, 3, 8);
  for (long n = 1; n <= 8; ++n)
    CHECK(std::abs(idtr.coeffs[n - 1].re.to_double() - f3.a(n).get_d()) < 1e-8);
  // newform at level 3 traced to level 1 vanishes (dim S_6(1) = 0)
  auto tr = trace_down([&](const Complex& z) { return evaluate_newform(f3, z); }, 6, 3, 1, 8);
  for (long n = 1; n <= 8; ++n) CHECK(abs(tr.coeffs[n - 1]).to_double() < 1e-8);
  // trace of V_p applied to a level-1 form, from level p to 1:
  // Tr (V_p f) = p^{1-k} a-relation form: Tr^p_1 V_p Delta = 2^{1-12} (T_2 Delta) checked
  // against the coefficient identity Tr V_p f = p^{1-w} T_p f for f level 1
  auto d = builtin_delta(200);
  auto vtr = trace_down(
      [&](const Complex& z) { return evaluate_newform(d, Complex(z.re * Real(2L), z.im * Real(2L))); },
      12, 2, 1, 6);
  // T_2 Delta = -24 Delta; p^{1-w} = 2^{-11}
  for (long n = 1; n <= 6; ++n) {
    double expect = -24.0 * d.a(n).get_d() / 2048.0;
    CHECK(std::abs(vtr.coeffs[n - 1].re.to_double() - expect) < 1e-7);
    CHECK(std::abs(vtr.coeffs[n - 1].im.to_double()) < 1e-7);
  }
}
