#ifndef WEILLIFT_NUMTHEORY_HPP
#define WEILLIFT_NUMTHEORY_HPP

#include <cstdint>
#include <vector>

#include "weillift/complex.hpp"

namespace weillift {
namespace nt {

// Kronecker symbol (D/n), fully multiplicative in n.
int kronecker(long D, long n);
int kronecker(const mpz_class& D, const mpz_class& n);

// Prime-exponent pairs, primes strictly increasing.
struct Factorization {
  std::vector<std::pair<mpz_class, unsigned>> factors;
  mpz_class value() const;
};

bool is_probable_prime(const mpz_class& n);
// Trial division below 10^6, then Miller-Rabin certified split via Pollard rho.
Factorization factorize(const mpz_class& n);
Factorization factorize(long n);

std::vector<long> divisors(long n);
long sigma1(long n);
int omega(long n);
bool is_squarefree(long n);
std::vector<long> prime_divisors(long n);

bool is_fundamental(long D);

// A fundamental discriminant, possibly negative.
struct Discriminant {
  long value;
  explicit Discriminant(long D);
  bool negative() const { return value < 0; }
  long abs() const { return value < 0 ? -value : value; }
};

// (D/p) = 1 for every prime p | N; N must be squarefree.
bool heegner_condition(long D, long N);

// prod_{p | N} (1 - p^{-s})^{-1}
Complex partial_zeta(long N, const Complex& s);
// Exact rational value at integer s >= 1 (s=1 included), for exact tests.
mpq_class partial_zeta_exact(long N, long s);

// s(s+2)...(s+2(r-1)) / (2 pi)^r  ==  Gamma_R(s+2r)/Gamma_R(s)
Complex gamma_R_ratio(const Complex& s, unsigned r);

// Completed archimedean factor Gamma_R(s) = pi^{-s/2} Gamma(s/2).
Complex gamma_R(const Complex& s);

// Modular sqrt of D mod 4N for squarefree N (Heegner condition assumed);
// returns smallest B >= 0 with B^2 = D (mod 4N).
long sqrt_mod_4N(long D, long N);

long gcd(long a, long b);

}  // namespace nt
}  // namespace weillift

#endif
