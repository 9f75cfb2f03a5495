#include "doctest.h"
#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"
#include "weillift/special.hpp"

#include <random>

using namespace weillift;
using nt::kronecker;

namespace {

// Euler criterion oracle for odd prime p
int euler_symbol(long a, long p) {
  long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  long e = (p - 1) / 2, acc = 1, base = r;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("kronecker examples") {
  CHECK(kronecker(1, 17) == 1);
  CHECK(kronecker(-7, 3) == euler_symbol(-7, 3));
  CHECK(kronecker(-7, 3) == -1);
  CHECK(kronecker(-3, 7) == euler_symbol(-3, 7));
  CHECK(kronecker(-3, 7) == 1);
}

TEST_CASE("kronecker agrees with Euler criterion at odd primes") {
  long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29};
  for (long D = -60; D <= 60; ++D) {
    if (D == 0) continue;
    for (long p : primes)
      if (D % p != 0) CHECK(kronecker(D, p) == euler_symbol(D, p));
  }
}

TEST_CASE("kronecker periodic mod |D| and completely multiplicative") {
  for (long D = -50; D <= 50; ++D) {
    if (!nt::is_fundamental(D) || D == 0) continue;
    long m = D < 0 ? -D : D;
    for (long n = 1; n + m <= 10000; ++n)
      REQUIRE(kronecker(D, n) == kronecker(D, n + m));
    for (long a = 1; a <= 100; ++a)
      for (long b = 1; a * b <= 10000; ++b)
        REQUIRE(kronecker(D, a * b) == kronecker(D, a) * kronecker(D, b));
  }
}

TEST_CASE("is_fundamental") {
  CHECK(nt::is_fundamental(-3));
  CHECK(!nt::is_fundamental(-12));
  CHECK(nt::is_fundamental(-8));
  CHECK(nt::is_fundamental(1));
  CHECK(nt::is_fundamental(5));
  CHECK(!nt::is_fundamental(-9));
  // against the raw definition
  for (long D = -200; D <= 200; ++D) {
    if (D == 0) continue;
    long m = ((D % 4) + 4) % 4;
    bool expect = false;
    if (m == 1) expect = nt::is_squarefree(std::abs(D));
    if (m == 0) {
      long q = D / 4;
      long qm = ((q % 4) + 4) % 4;
      expect = (qm == 2 || qm == 3) && nt::is_squarefree(std::abs(q));
    }
    if (D == 1) expect = true;
    CHECK(nt::is_fundamental(D) == expect);
  }
}

TEST_CASE("heegner condition") {
  CHECK(nt::heegner_condition(-11, 3));
  CHECK(!nt::heegner_condition(-7, 3));
  CHECK(nt::heegner_condition(-7, 1));
  CHECK_THROWS_AS(nt::heegner_condition(-7, 4), validation_error);
}

TEST_CASE("partial zeta") {
  Complex s{Real(2L)};
  CHECK(abs(nt::partial_zeta(1, s) - Complex(Real(1L))).to_double() == 0.0);
  CHECK(nt::partial_zeta_exact(3, 1) == mpq_class(3, 2));
  CHECK(nt::partial_zeta_exact(6, 2) == mpq_class(3, 2));
  // exact product identity at rational s
  for (long N : {2L, 3L, 6L, 30L, 105L}) {
    for (long sv : {1L, 2L, 3L, 5L}) {
      mpq_class prod = nt::partial_zeta_exact(N, sv);
      for (long p : nt::prime_divisors(N)) {
        mpz_class ps;
        mpz_ui_pow_ui(ps.get_mpz_t(), p, sv);
        prod *= mpq_class(ps - 1, ps);
      }
      prod.canonicalize();
      CHECK(prod == 1);
    }
  }
}

TEST_CASE("gamma_R_ratio") {
  ScopedPrecision sp(256);
  CHECK(abs(nt::gamma_R_ratio(Complex(Real(0.7), Real(0.1)), 0) - Complex(Real(1L))).to_double() == 0.0);
  Real tp = Real::pi() * 2L;
  CHECK(abs(nt::gamma_R_ratio(Complex(Real(1L)), 1) - Complex(1L / tp)).to_double() < 1e-70);
  // (0.5, 2) -> 0.5*2.5/(2 pi)^2
  Real expect = Real(0.5) * Real(2.5) / (tp * tp);
  CHECK(std::abs(nt::gamma_R_ratio(Complex(Real(0.5)), 2).re.to_double() - expect.to_double()) < 1e-15);
  CHECK(std::abs(expect.to_double() - 0.0316629) < 2e-7);

  // against the Gamma-function quotient at 20 pseudo-random samples
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.3, 4.0), ui(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    Complex s{Real(ur(rng)), Real(ui(rng))};
    unsigned r = static_cast<unsigned>(rng() % 4);
    Complex lhs = nt::gamma_R_ratio(s, r);
    Complex rhs = nt::gamma_R(s + Complex(Real(2L * static_cast<long>(r)))) / nt::gamma_R(s);
    CHECK((abs(lhs - rhs) / abs(rhs)).to_double() < 1e-12);
  }
}

TEST_CASE("divisor functions") {
  CHECK(nt::sigma1(1) == 1);
  // enumerate-divisors oracle
  long s = 0;
  for (long d = 1; d <= 6; ++d)
    if (6 % d == 0) s += d;
  CHECK(nt::sigma1(6) == s);
  CHECK(nt::sigma1(6) == 12);
  CHECK(nt::omega(12) == 2);
  CHECK(nt::divisors(12) == std::vector<long>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("factorization") {
  auto f = nt::factorize(mpz_class("1334025"));  // 3^2 * 5^2 * 7^2 * 11^2
  CHECK(f.value() == mpz_class("1334025"));
  for (auto& [p, e] : f.factors) CHECK(nt::is_probable_prime(p));
  // invariants: strictly increasing primes
  for (size_t i = 1; i < f.factors.size(); ++i)
    CHECK(f.factors[i - 1].first < f.factors[i].first);
  // larger semiprime through rho
  mpz_class n = mpz_class("10000019") * mpz_class("10000079");
  auto g = nt::factorize(n);
  CHECK(g.value() == n);
  CHECK(g.factors.size() == 2);
}

TEST_CASE("sqrt mod 4N") {
  long B = nt::sqrt_mod_4N(-11, 3);
  CHECK(((B * B + 11) % 12) == 0);
  long B2 = nt::sqrt_mod_4N(-8, 3);
  CHECK(((B2 * B2 + 8) % 12) == 0);
}
