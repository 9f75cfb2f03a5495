#include "weillift/eta.hpp"

#include <numeric>

#include "weillift/errors.hpp"

namespace weillift {
namespace qexp {

mpq_class dedekind_sum(const mpz_class& h0, const mpz_class& k) {
  if (k < 1) throw validation_error("dedekind_sum: k >= 1");
  mpz_class h;
  mpz_fdiv_r(h.get_mpz_t(), h0.get_mpz_t(), k.get_mpz_t());
  if (k == 1 || h == 0) return 0;
  // reciprocity: s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12
  mpq_class a(h, k), b(k, h), c(1, h * k);
  a.canonicalize();
  b.canonicalize();
  c.canonicalize();
  mpq_class rec = mpq_class(-1, 4) + (a + b + c) / 12;
  mpq_class r = rec - dedekind_sum(k, h);
  r.canonicalize();
  return r;
}

mpq_class dedekind_sum(long h, long k) { return dedekind_sum(mpz_class(h), mpz_class(k)); }

namespace {

// reduce tau into |Re| <= 1/2, |tau| >= 1 tracking gamma with gamma tau = out;
// entries in mpz, since points close to the real axis need huge matrices
struct Reduction {
  mpz_class a = 1, b = 0, c = 0, d = 1;
  Complex tau;
};

Reduction sl2_reduce(const Complex& tau0) {
  Reduction r;
  r.tau = tau0;
  for (int guard = 0; guard < 100000; ++guard) {
    // translate
    mpz_class t = round_to_mpz(r.tau.re);
    if (t != 0) {
      r.tau.re -= Real(t);
      r.a -= t * r.c;
      r.b -= t * r.d;
    }
    if (norm2(r.tau) < Real(1L)) {
      // invert: tau -> -1/tau, gamma -> S gamma
      Complex nt = Complex(Real(-1L)) / r.tau;
      r.tau = nt;
      mpz_class na = -r.c, nb = -r.d, nc = r.a, nd = r.b;
      r.a = na;
      r.b = nb;
      r.c = nc;
      r.d = nd;
      continue;
    }
    return r;
  }
  throw precision_error("sl2_reduce: did not terminate");
}

// eta multiplier for gamma with c > 0:
// eta(gamma tau) = eps(gamma) sqrt(c tau + d) eta(tau),
// eps = exp(pi i ((a+d)/(12c) - s(d,c) - 1/4))
Complex eta_multiplier(const mpz_class& a, const mpz_class& c, const mpz_class& d) {
  mpq_class ad(a + d, 12 * c);
  ad.canonicalize();
  mpq_class ang = ad - dedekind_sum(d, c) - mpq_class(1, 4);
  // e^{pi i ang} = e2pi(ang/2)
  mpq_class half = ang / 2;
  return e2pi(half);
}

Complex eta_series(const Complex& tau) {
  // q^{1/24} prod (1 - q^n); |q| <= e^{-pi sqrt 3} after reduction
  Complex q = e2pi(tau);
  Complex acc{Real(1L)};
  Complex qn{Real(1L)};
  Real tol = pow2(-static_cast<long>(default_prec()) - 8);
  for (int n = 1; n < 100000; ++n) {
    qn *= q;
    acc *= Complex(Real(1L)) - qn;
    if (abs(qn) < tol) break;
  }
  return e2pi(tau / 24L) * acc;
}

}  // namespace

Complex eta(const Complex& tau) {
  if (!(tau.im > 0L)) throw validation_error("eta: tau must be in the upper half plane");
  Reduction r = sl2_reduce(tau);
  // r: gamma tau0 = tau_reduced; eta(gamma tau0) = eps sqrt(c tau0 + d) eta(tau0)
  mpz_class a = r.a, b = r.b, c = r.c, d = r.d;
  if (c < 0 || (c == 0 && d < 0)) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
  Complex value = eta_series(r.tau);
  if (c == 0) {
    // gamma = T^b up to sign: eta(tau + b) = e(b/24) eta(tau)
    mpq_class sh(b, 24);
    sh.canonicalize();
    return value / e2pi(sh);
  }
  Complex eps = eta_multiplier(a, c, d);
  Complex root = sqrt(Complex(Real(c)) * tau + Complex(Real(d)));
  return value / (eps * root);
}

QExpansion eta_qexp(long nmax24) {
  // pentagonal number expansion of prod(1-q^n), then shift by q^{1/24}
  QExpansion p(1, 0, nmax24 / 24 + 2);
  p.at(0) = 1;
  for (long k = 1;; ++k) {
    long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
    if (g1 > p.nmax() && g2 > p.nmax()) break;
    mpq_class s = (k % 2 == 1) ? mpq_class(-1) : mpq_class(1);
    if (g1 <= p.nmax()) p.at(g1) = s;
    if (g2 <= p.nmax()) p.at(g2) = s;
  }
  QExpansion r = p.with_den(24).truncated(nmax24 - 1);
  // multiply by q^{1/24}: shift exponents by one 24th
  QExpansion out(24, r.n0() + 1, r.nmax() + 1, mpq_class(1, 2), 1);
  for (long n = r.n0(); n <= r.nmax(); ++n) out.at(n + 1, 24) = r.coeff(n, 24);
  return out;
}

mpq_class EtaQuotient::weight() const {
  mpq_class w(0);
  for (auto& [d, e] : exponents) w += mpq_class(e, 2);
  return w;
}

QExpansion EtaQuotient::expansion(long nmax) const {
  long order24 = 24 * nmax + 48;
  bool first = true;
  QExpansion acc;
  for (auto& [d, e] : exponents) {
    if (e == 0) continue;
    QExpansion base = eta_qexp(order24 / d + 48).V(d);
    QExpansion pw = (e > 0) ? base.pow(static_cast<unsigned>(e))
                            : base.inverse().pow(static_cast<unsigned>(-e));
    if (first) {
      acc = std::move(pw);
      first = false;
    } else {
      acc = acc * pw;
    }
  }
  if (first) throw validation_error("EtaQuotient: empty product");
  acc = acc.truncated(std::min(acc.nmax(), 24 * nmax));
  acc.set_weight(weight());
  if (level_hint) acc.set_level(level_hint);
  return acc;
}

Complex EtaQuotient::eval(const Complex& tau) const {
  Complex acc{Real(1L)};
  for (auto& [d, e] : exponents) {
    Complex v = eta(Complex(tau.re * Real(d), tau.im * Real(d)));
    acc *= pow(v, static_cast<long>(e));
  }
  return acc;
}

}  // namespace qexp
}  // namespace weillift
