#include "weillift/numtheory.hpp"

#include <algorithm>
#include <numeric>

#include "weillift/errors.hpp"
#include "weillift/special.hpp"

namespace weillift {
namespace nt {

long gcd(long a, long b) { return std::gcd(a, b); }

int kronecker(const mpz_class& D, const mpz_class& n) {
  return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t());
}

int kronecker(long D, long n) {
  mpz_class d(D);
  return mpz_kronecker_si(d.get_mpz_t(), n);
}

bool is_probable_prime(const mpz_class& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
  if (n % 2 == 0) return 2;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x5eed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    mpz_class c = rng.get_z_range(n - 3) + 1;
    mpz_class x = rng.get_z_range(n - 2) + 1, y = x, d = 1;
    mpz_class diff;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
  throw error("pollard_rho: failed to split composite");
}

void factor_into(mpz_class n, std::vector<std::pair<mpz_class, unsigned>>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out.emplace_back(n, 1);
    return;
  }
  mpz_class d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

mpz_class Factorization::value() const {
  mpz_class v(1);
  for (const auto& [p, e] : factors)
    for (unsigned i = 0; i < e; ++i) v *= p;
  return v;
}

Factorization factorize(const mpz_class& n) {
  if (n < 1) throw validation_error("factorize: n must be >= 1");
  Factorization f;
  mpz_class m = n;
  for (long p = 2; p <= 1000000 && mpz_class(p) * p <= m; p = (p == 2 ? 3 : p + 2)) {
    if (m % p == 0) {
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      f.factors.emplace_back(p, e);
    }
  }
  if (m > 1) {
    std::vector<std::pair<mpz_class, unsigned>> rest;
    factor_into(m, rest);
    std::sort(rest.begin(), rest.end());
    // merge equal primes
    for (auto& [p, e] : rest) {
      if (!f.factors.empty() && f.factors.back().first == p)
        f.factors.back().second += e;
      else
        f.factors.emplace_back(p, e);
    }
  }
  return f;
}

Factorization factorize(long n) { return factorize(mpz_class(n)); }

std::vector<long> divisors(long n) {
  if (n < 1) throw validation_error("divisors: n must be >= 1");
  std::vector<long> ds{1};
  Factorization f = factorize(n);
  for (const auto& [pz, e] : f.factors) {
    long p = pz.get_si();
    size_t base = ds.size();
    long pe = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pe *= p;
      for (size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pe);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

long sigma1(long n) {
  auto ds = divisors(n);
  return std::accumulate(ds.begin(), ds.end(), 0L);
}

int omega(long n) {
  return static_cast<int>(factorize(n).factors.size());
}

bool is_squarefree(long n) {
  if (n < 1) return false;
  for (const auto& [p, e] : factorize(n).factors)
    if (e > 1) return false;
  return true;
}

std::vector<long> prime_divisors(long n) {
  std::vector<long> ps;
  for (const auto& [p, e] : factorize(n).factors) ps.push_back(p.get_si());
  return ps;
}

bool is_fundamental(long D) {
  if (D == 1) return true;
  if (D == 0) return false;
  long m = D % 4;
  if (m < 0) m += 4;
  if (m == 1) return is_squarefree(D < 0 ? -D : D);
  if (m != 0) return false;
  long q = D / 4;
  long qm = q % 4;
  if (qm < 0) qm += 4;
  if (qm != 2 && qm != 3) return false;
  return is_squarefree(q < 0 ? -q : q);
}

Discriminant::Discriminant(long D) : value(D) {
  if (!is_fundamental(D))
    throw validation_error("Discriminant: not a fundamental discriminant");
}

bool heegner_condition(long D, long N) {
  if (N < 1 || !is_squarefree(N))
    throw validation_error("heegner_condition: N must be squarefree positive");
  for (long p : prime_divisors(N))
    if (kronecker(D, p) != 1) return false;
  return true;
}

Complex partial_zeta(long N, const Complex& s) {
  if (N < 1) throw validation_error("partial_zeta: N must be positive");
  Complex prod{Real(1L)};
  for (long p : prime_divisors(N)) {
    Complex f = Complex(Real(1L)) - pow(Real(static_cast<long>(p)), -s);
    if (abs(f) < pow2(-static_cast<long>(default_prec()) + 8))
      throw validation_error("partial_zeta: pole, p^{-s} = 1");
    prod /= f;
  }
  return prod;
}

mpq_class partial_zeta_exact(long N, long s) {
  if (N < 1 || s < 1) throw validation_error("partial_zeta_exact: bad input");
  mpq_class prod(1);
  for (long p : prime_divisors(N)) {
    mpz_class ps;
    mpz_ui_pow_ui(ps.get_mpz_t(), p, s);
    prod *= mpq_class(ps, ps - 1);
  }
  prod.canonicalize();
  return prod;
}

Complex gamma_R(const Complex& s) {
  Real pi = Real::pi();
  return pow(pi, -s / 2L) * cgamma(s / 2L);
}

Complex gamma_R_ratio(const Complex& s, unsigned r) {
  Complex prod{Real(1L)};
  for (unsigned j = 0; j < r; ++j) prod *= s + Complex(Real(2L * static_cast<long>(j)));
  Real two_pi = Real::pi() * 2L;
  return prod / pow(Complex(two_pi), static_cast<long>(r));
}

long sqrt_mod_4N(long D, long N) {
  long M = 4 * N;
  for (long B = 0; B < M; ++B) {
    if (((B * B - D) % M + M) % M == 0) return B;
  }
  throw validation_error("sqrt_mod_4N: no square root; Heegner condition violated");
}

}  // namespace nt
}  // namespace weillift
