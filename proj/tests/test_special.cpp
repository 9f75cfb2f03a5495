#include "doctest.h"
#include "weillift/special.hpp"

#include <random>

using namespace weillift;

TEST_CASE("bernoulli numbers") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == mpq_class(-1, 2));
  CHECK(bernoulli(2) == mpq_class(1, 6));
  CHECK(bernoulli(4) == mpq_class(-1, 30));
  CHECK(bernoulli(6) == mpq_class(1, 42));
  CHECK(bernoulli(12) == mpq_class(-691, 2730));
  CHECK(bernoulli(7) == 0);
}

TEST_CASE("complex gamma against mpfr on the real axis") {
  ScopedPrecision sp(256);
  for (double x : {0.25, 0.5, 1.0, 2.5, 7.75, 21.0}) {
    Complex g = cgamma(Complex(Real(x)));
    Real expect = gamma(Real(x));
    CHECK((abs(g - Complex(expect)) / expect).to_double() < 1e-70);
  }
  // reflection side
  Complex gneg = cgamma(Complex(Real(-0.5)));
  Real expect = Real(-2L) * sqrt(Real::pi());
  CHECK(std::abs(gneg.re.to_double() - expect.to_double()) < 1e-60);
  CHECK(std::abs(gneg.im.to_double()) < 1e-60);
}

TEST_CASE("gamma functional identities at complex points") {
  ScopedPrecision sp(256);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(-3.0, 5.0), ui(-4.0, 4.0);
  for (int i = 0; i < 12; ++i) {
    Complex z{Real(ur(rng)), Real(ui(rng) + 0.37)};
    // recurrence
    Complex lhs = cgamma(z + Complex(Real(1L)));
    Complex rhs = z * cgamma(z);
    CHECK((abs(lhs - rhs) / abs(rhs)).to_double() < 1e-68);
    // duplication: Gamma(z) Gamma(z+1/2) = 2^{1-2z} sqrt(pi) Gamma(2z)
    Complex dup = cgamma(z) * cgamma(z + Complex(Real(0.5)));
    Complex rhs2 = pow(Complex(Real(2L)), Complex(Real(1L)) - 2L * z) * Complex(sqrt(Real::pi())) *
                   cgamma(2L * z);
    CHECK((abs(dup - rhs2) / abs(rhs2)).to_double() < 1e-65);
  }
}

TEST_CASE("upper incomplete gamma") {
  ScopedPrecision sp(192);
  // Gamma(1, x) = e^{-x}
  for (double x : {0.3, 1.0, 5.0, 19.0}) {
    Complex g = upper_gamma(Complex(Real(1L)), Real(x));
    CHECK((abs(g - Complex(exp(Real(-x)))) / abs(g)).to_double() < 1e-50);
  }
  // recurrence Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.2, 6.0), ui(-3.0, 3.0), ux(0.05, 25.0);
  for (int i = 0; i < 14; ++i) {
    Complex a{Real(ur(rng)), Real(ui(rng))};
    Real x(ux(rng));
    Complex lhs = upper_gamma(a + Complex(Real(1L)), x);
    Complex rhs = a * upper_gamma(a, x) + exp(a * log(Complex(x)) - Complex(x));
    CHECK((abs(lhs - rhs) / abs(lhs)).to_double() < 1e-45);
  }
  // limit x -> 0+ of Gamma(a,x) is Gamma(a) for Re a > 0
  Complex a{Real(1.7), Real(0.4)};
  Complex g0 = upper_gamma(a, Real(1e-30));
  CHECK((abs(g0 - cgamma(a)) / abs(g0)).to_double() < 1e-25);
}

TEST_CASE("gauss-legendre rules") {
  ScopedPrecision sp(256);
  const GLRule& r = gauss_legendre(12);
  // exact for polynomials of degree <= 23: integrate x^k on [-1,1]
  for (int k = 0; k <= 23; ++k) {
    Real s(0L);
    for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * pow(r.nodes[i], (long)k);
    Real expect = (k % 2 == 1) ? Real(0L) : Real(2L) / (k + 1L);
    CHECK(abs(s - expect).to_double() < 1e-70);
  }
  // weights sum to 2
  Real w(0L);
  for (const auto& x : r.weights) w += x;
  CHECK(abs(w - Real(2L)).to_double() < 1e-70);
}
