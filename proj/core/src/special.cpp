#include "weillift/special.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "weillift/errors.hpp"

namespace weillift {

const mpq_class& bernoulli(unsigned n) {
  static std::vector<mpq_class> cache{mpq_class(1), mpq_class(-1, 2)};
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  while (cache.size() <= n) {
    unsigned m = static_cast<unsigned>(cache.size());
    if (m % 2 == 1) {
      cache.emplace_back(0);
      continue;
    }
    // sum_{j<m} C(m+1,j) B_j = -C(m+1,m) B_m
    mpq_class s(0);
    mpz_class binom(1);  // C(m+1, j), starts at j=0
    for (unsigned j = 0; j < m; ++j) {
      s += mpq_class(binom) * cache[j];
      binom *= static_cast<long>(m + 1 - j);
      binom /= static_cast<long>(j + 1);
    }
    mpq_class b = -s / mpq_class(binom);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[n];
}

Complex rising(const Complex& x, unsigned n) {
  Complex p{Real(1L)};
  for (unsigned j = 0; j < n; ++j) p *= x + Complex(Real(static_cast<long>(j)));
  return p;
}

namespace {

// ln Gamma by the Stirling series; requires |z| large enough for the target
// precision, which stirling_ready checks.
Complex stirling_lngamma(const Complex& z, mpfr_prec_t wp, bool& ok) {
  Real az = abs(z);
  Complex lz = log(z);
  Complex acc = (z - Complex(Real(0.5))) * lz - z;
  Real two_pi = Real::pi(wp) * 2L;
  acc += Complex(log(two_pi) / 2L);
  Complex zinv = 1L / z;
  Complex z2inv = zinv * zinv;
  Complex t = zinv;
  Real tol = pow2(-static_cast<long>(wp), wp);
  Real prev_mag = abs(t) * 10L;
  ok = false;
  for (unsigned n = 1; n < 4096; ++n) {
    const mpq_class& b = bernoulli(2 * n);
    mpq_class coef = b / mpq_class(2 * n * (2 * n - 1));
    Complex term = Real(coef) * t;
    Real mag = abs(term);
    acc += term;
    if (mag < tol) {
      ok = true;
      break;
    }
    if (mag > prev_mag) break;  // asymptotic series started diverging
    prev_mag = mag;
    t *= z2inv;
  }
  (void)az;
  return acc;
}

Complex cgamma_rhp(const Complex& z0, mpfr_prec_t wp) {
  // Shift until the Stirling tail reaches the target, then divide back.
  double need = 0.17 * static_cast<double>(wp) + 8.0;  // |z| ~ wp*ln2/4 suffices
  double re = z0.re.to_double(), im = z0.im.to_double();
  double mod = std::sqrt(re * re + im * im);
  long m = 0;
  if (mod < need) m = static_cast<long>(need - re) + 1;
  if (m < 0) m = 0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Complex zs = z0 + Complex(Real(m));
    bool ok = false;
    Complex ln = stirling_lngamma(zs, wp, ok);
    if (ok) {
      Complex g = exp(ln);
      if (m > 0) g /= rising(z0, static_cast<unsigned>(m));
      return g;
    }
    m += static_cast<long>(need) + 8;
  }
  throw precision_error("cgamma: Stirling series failed to converge");
}

}  // namespace

Complex cgamma(const Complex& z) {
  mpfr_prec_t p = join_prec(z.re, z.im);
  mpfr_prec_t wp = p + 64;
  ScopedPrecision sp(wp);
  Complex zz{Real(Prec(wp)), Real(Prec(wp))};
  mpfr_set(zz.re.get(), z.re.get(), MPFR_RNDN);
  mpfr_set(zz.im.get(), z.im.get(), MPFR_RNDN);
  if (zz.im.is_zero()) {
    // pole check on the real axis
    Real r = zz.re;
    if (r <= 0L && r == floor(r))
      throw validation_error("cgamma: pole at non-positive integer");
    if (r > 0L) return Complex(gamma(r));
  }
  if (zz.re < Real(0.5)) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    Real pi = Real::pi(wp);
    Complex s = sin(Complex(pi) * zz);
    if (s.is_zero()) throw validation_error("cgamma: pole at non-positive integer");
    return Complex(pi) / (s * cgamma_rhp(Complex(Real(1L)) - zz, wp));
  }
  return cgamma_rhp(zz, wp);
}

Complex clog_gamma(const Complex& z) {
  if (z.re <= 0L)
    throw validation_error("clog_gamma: requires Re(z) > 0");
  mpfr_prec_t wp = join_prec(z.re, z.im) + 64;
  ScopedPrecision sp(wp);
  double need = 0.17 * static_cast<double>(wp) + 8.0;
  long m = static_cast<long>(need) + 1;
  Complex zs = z + Complex(Real(m));
  bool ok = false;
  Complex ln = stirling_lngamma(zs, wp, ok);
  if (!ok) throw precision_error("clog_gamma: series failed");
  for (long j = 0; j < m; ++j) ln -= log(z + Complex(Real(j)));
  return ln;
}

namespace {

Complex upper_gamma_series(const Complex& a, const Real& x, mpfr_prec_t wp) {
  // gamma(a,x) = x^a e^{-x} sum_n x^n / (a (a+1) ... (a+n)), then subtract.
  Complex denom = a;
  Complex term = 1L / a;
  Complex acc = term;
  Real tol = pow2(-static_cast<long>(wp) - 8, wp);
  for (unsigned n = 1; n < 100000; ++n) {
    denom += Complex(Real(1L));
    term = term * x / denom;
    acc += term;
    if (abs(term) < tol * abs(acc)) {
      Complex lower = exp(a * log(Complex(x)) - Complex(x)) * acc;
      return cgamma(a) - lower;
    }
  }
  throw convergence_error("upper_gamma: series did not converge");
}

Complex upper_gamma_cf(const Complex& a, const Real& x, mpfr_prec_t wp) {
  // Lentz continued fraction for x reasonably larger than |a|.
  Real tiny = pow2(-2 * static_cast<long>(wp), wp);
  Real tol = pow2(-static_cast<long>(wp) + 24, wp);
  Complex b = Complex(x) + Complex(Real(1L)) - a;
  Complex c = Complex(Real(1L)) / Complex(tiny);
  Complex d = b;
  if (d.is_zero()) d = Complex(tiny);
  d = 1L / d;
  Complex h = d;
  for (unsigned i = 1; i < 100000; ++i) {
    Complex an = Real(-static_cast<long>(i)) * (Complex(Real(static_cast<long>(i))) - a);
    b += Complex(Real(2L));
    d = an * d + b;
    if (d.is_zero()) d = Complex(tiny);
    c = b + an / c;
    if (c.is_zero()) c = Complex(tiny);
    d = 1L / d;
    Complex delta = d * c;
    h *= delta;
    if (abs(delta - Complex(Real(1L))) < tol)
      return exp(a * log(Complex(x)) - Complex(x)) * h;
  }
  throw convergence_error("upper_gamma: continued fraction did not converge");
}

// E_1(x) = Gamma(0, x); power series with cancellation guard for small x
Complex exp_int_E1(const Real& x, mpfr_prec_t wp) {
  double xd = x.to_double();
  if (xd > 36.0) {
    ScopedPrecision sp(wp);
    Real xx{Prec(wp)};
    mpfr_set(xx.get(), x.get(), MPFR_RNDN);
    Complex zero{Real(Prec(wp)), Real(Prec(wp))};
    return upper_gamma_cf(zero, xx, wp);
  }
  mpfr_prec_t wp2 = wp + static_cast<mpfr_prec_t>(xd * 1.45) + 16;
  ScopedPrecision sp(wp2);
  Real xx{Prec(wp2)};
  mpfr_set(xx.get(), x.get(), MPFR_RNDN);
  Real acc(0L), term(1L);
  Real tol = pow2(-static_cast<long>(wp2), wp2);
  for (long k = 1; k < 100000; ++k) {
    term *= xx;
    term /= k;
    Real add = term / k;
    if (k % 2 == 0) add = -add;
    acc += add;
    if (abs(add) < tol) break;
  }
  Real euler{Prec(wp2)};
  mpfr_const_euler(euler.get(), MPFR_RNDN);
  return Complex(acc - euler - log(xx));
}

// Gamma(-m, x) for integer m >= 0 by downward recursion from E_1
Complex upper_gamma_nonpos_int(long m, const Real& x, mpfr_prec_t wp) {
  ScopedPrecision sp(wp);
  Complex g = exp_int_E1(x, wp);
  if (m == 0) return g;
  Real ex = exp(-x);
  for (long j = 1; j <= m; ++j) {
    // Gamma(a-1, x) = (Gamma(a, x) - x^{a-1} e^{-x}) / (a - 1) with a = 1-j
    Real xp = pow(x, -j);
    g = (g - Complex(xp * ex)) / Complex(Real(-j));
  }
  return g;
}

}  // namespace

Complex upper_gamma(const Complex& a, const Real& x) {
  if (x <= 0L) throw validation_error("upper_gamma: x must be positive");
  mpfr_prec_t wp = join_prec(a.re, a.im) + 64;
  if (x.prec() + 64 > wp) wp = x.prec() + 64;
  // nonpositive integer order: poles of Gamma(a) and gamma(a, x) cancel;
  // handled through E_1 and the recurrence
  if (a.re < Real(0.45)) {
    Real rounded = a.re;
    mpfr_rint(rounded.get(), a.re.get(), MPFR_RNDN);
    Real d1 = abs(a.re - rounded);
    if (abs(a.im) < pow2(-40) && d1 < pow2(-40)) {
      long m = -rounded.to_long();
      if (m >= 0 && d1.is_zero() && a.im.is_zero())
        return upper_gamma_nonpos_int(m, x, wp);
      if (m >= 0)
        throw validation_error("upper_gamma: a too close to a nonpositive integer");
    }
    // shift into Re > 0.45 and recurse down: Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x})/a
    long shift = static_cast<long>(std::ceil(0.5 - a.re.to_double()));
    ScopedPrecision sp(wp);
    Complex g = upper_gamma(a + Complex(Real(shift)), x);
    Real ex = exp(-x);
    for (long j = shift; j >= 1; --j) {
      Complex aj = a + Complex(Real(j - 1));
      g = (g - exp(aj * log(Complex(x))) * Complex(ex)) / aj;
    }
    return g;
  }
  double xa = x.to_double();
  double am = abs(a).to_double();
  if (xa > am + 4.0) {
    ScopedPrecision sp(wp);
    Complex aa{Real(Prec(wp)), Real(Prec(wp))};
    mpfr_set(aa.re.get(), a.re.get(), MPFR_RNDN);
    mpfr_set(aa.im.get(), a.im.get(), MPFR_RNDN);
    Real xx{Prec(wp)};
    mpfr_set(xx.get(), x.get(), MPFR_RNDN);
    return upper_gamma_cf(aa, xx, wp);
  }
  // series loses ~x/ln2 bits to cancellation
  mpfr_prec_t wp2 = wp + static_cast<mpfr_prec_t>(xa * 1.45) + 16;
  ScopedPrecision sp2(wp2);
  Complex aa{Real(Prec(wp2)), Real(Prec(wp2))};
  mpfr_set(aa.re.get(), a.re.get(), MPFR_RNDN);
  mpfr_set(aa.im.get(), a.im.get(), MPFR_RNDN);
  Real xx{Prec(wp2)};
  mpfr_set(xx.get(), x.get(), MPFR_RNDN);
  return upper_gamma_series(aa, xx, wp2);
}

const GLRule& gauss_legendre(unsigned n) {
  static std::map<std::pair<unsigned, mpfr_prec_t>, GLRule> cache;
  static std::mutex mu;
  mpfr_prec_t p = default_prec();
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  ScopedPrecision sp(p + 32);
  GLRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  Real pi = Real::pi();
  Real tol = pow2(-static_cast<long>(p) - 16);
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    Real x = cos(pi * (Real(static_cast<long>(i)) + Real(0.75)) / (Real(static_cast<long>(n)) + Real(0.5)));
    Real dp(0L);
    for (int iter = 0; iter < 200; ++iter) {
      // Legendre recurrence at x
      Real p0(1L), p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        Real p2 = ((2L * static_cast<long>(k) - 1L) * x * p1 - (static_cast<long>(k) - 1L) * p0) / static_cast<long>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<long>(n) * (x * p1 - p0) / (x * x - 1L);
      Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    // final weight with converged x
    Real p0(1L), p1 = x;
    for (unsigned k = 2; k <= n; ++k) {
      Real p2 = ((2L * static_cast<long>(k) - 1L) * x * p1 - (static_cast<long>(k) - 1L) * p0) / static_cast<long>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<long>(n) * (x * p1 - p0) / (x * x - 1L);
    Real w = 2L / ((1L - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  auto res = cache.emplace(key, std::move(rule));
  return res.first->second;
}

}  // namespace weillift
