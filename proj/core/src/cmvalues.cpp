#include "weillift/cmvalues.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weillift/errors.hpp"
#include "weillift/forms.hpp"
#include "weillift/parallel.hpp"
#include "weillift/special.hpp"

namespace weillift {
namespace cm {

Complex legendre_Q(const Complex& nu, const Real& t) {
  if (!(t > 1L)) throw validation_error("legendre_Q: t > 1 required");
  // Q_nu(t) = int_0^inf (t + sqrt(t^2-1) cosh v)^{-(nu+1)} dv
  Complex s = nu + Complex(Real(1L));
  if (!(s.re > 0L)) throw validation_error("legendre_Q: Re(s) > 0 required for the integral");
  mpfr_prec_t prec = default_prec();
  Real w = sqrt(t * t - 1L);
  double sre = s.re.to_double();
  double vmax = (0.6931 * prec + 32 + 4 * std::abs(s.im.to_double())) / sre + 4;
  const GLRule& rule = gauss_legendre(32);
  Complex acc{Real(0L)};
  long panels = std::max<long>(8, static_cast<long>(vmax));
  for (long j = 0; j < panels; ++j) {
    Real a = Real(vmax) * j / panels, b = Real(vmax) * (j + 1) / panels;
    Real mid = (a + b) / 2L, half = (b - a) / 2L;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      Real v = mid + half * rule.nodes[i];
      Real base = t + w * cosh(v);
      acc += Complex(rule.weights[i] * half) * exp(-s * Complex(log(base)));
    }
  }
  return acc;
}

namespace {

// Q_nu(t) by the hypergeometric series in 1/t^2: fast for t away from 1:
// Q_nu(t) = sqrt(pi) Gamma(nu+1)/Gamma(nu+3/2) (2t)^{-nu-1}
//           2F1(nu/2+1, nu/2+1/2; nu+3/2; t^{-2})
Real legendre_Q_series(const Real& nu, const Real& t) {
  Real z = 1L / (t * t);
  Real a = nu / 2L + 1L, b = nu / 2L + Real(0.5), c = nu + Real(1.5);
  Real term(1L), acc(1L);
  Real tol = pow2(-static_cast<long>(default_prec()) - 8);
  for (long n = 0; n < 200000; ++n) {
    term *= (a + n) * (b + n) * z / ((c + n) * (n + 1L));
    acc += term;
    if (abs(term) < tol * abs(acc)) break;
  }
  Real front = sqrt(Real::pi()) * gamma(nu + 1L) / gamma(nu + Real(1.5));
  front *= pow(2L * t, -(nu + 1L));
  return front * acc;
}

}  // namespace

Real green_g(const Real& s, const Complex& z1, const Complex& z2) {
  if (!(z1.im > 0L) || !(z2.im > 0L))
    throw validation_error("green_g: points must be in the upper half plane");
  Real t = 1L + norm2(z1 - z2) / (2L * z1.im * z2.im);
  if (!(t > 1L)) throw validation_error("green_g: points coincide");
  if (t > Real(1.02)) return -2L * legendre_Q_series(s - 1L, t);
  Complex q = legendre_Q(Complex(s - 1L), t);
  return -2L * q.re;
}

GreenSum green_GN(const Real& s, long N, const Complex& z1, const Complex& z2, double cutoff) {
  if (cutoff < 16) throw validation_error("green_GN: cutoff too small");
  double y1 = z1.im.to_double(), y2 = z2.im.to_double();
  double x1 = z1.re.to_double();
  GreenSum out{Real(0L), 0.0, 0};
  // rows (c,d) of Gamma_0(N): N | c, gcd(c,d)=1; for each, gamma_0 z2 is
  // fixed up to integer translations
  double cdbound = 2 * cutoff * y2 / y1;  // |c z2 + d|^2 <= 2 X y2 / y1
  long cmax = static_cast<long>(std::sqrt(cdbound) / (N * y2)) + 1;
  long count_half = 0, count_full = 0;
  Real X(cutoff);
  for (long cc = -cmax; cc <= cmax; ++cc) {
    long c = N * cc;
    double dspan = std::sqrt(std::max(cdbound, 0.0));
    double dcenter = -c * z2.re.to_double();
    long dlo = static_cast<long>(std::floor(dcenter - dspan)) - 1;
    long dhi = static_cast<long>(std::ceil(dcenter + dspan)) + 1;
    for (long d = dlo; d <= dhi; ++d) {
      if (c == 0 && (d != 1 && d != -1)) continue;
      if (std::gcd(std::labs(c), std::labs(d)) != 1) continue;
      // complete to [[a,b],[c,d]]
      mpz_class g, u, v, cz(c), dz(d);
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), cz.get_mpz_t(), dz.get_mpz_t());
      long a = v.get_si(), b = -u.get_si();
      Complex den = Complex(Real(c)) * z2 + Complex(Real(d));
      Complex w = (Complex(Real(a)) * z2 + Complex(Real(b))) / den;
      double yw = w.im.to_double();
      // m-window: (x1 - xw - m)^2 <= 2 y1 yw (X-1) - (y1-yw)^2
      double rad2 = 2 * y1 * yw * (cutoff - 1) - (y1 - yw) * (y1 - yw);
      if (rad2 < 0) continue;
      double rad = std::sqrt(rad2);
      double xw = w.re.to_double();
      long mlo = static_cast<long>(std::floor(x1 - xw - rad)) - 1;
      long mhi = static_cast<long>(std::ceil(x1 - xw + rad)) + 1;
      for (long m = mlo; m <= mhi; ++m) {
        Complex wm{w.re + Real(m), w.im};
        Real t = 1L + norm2(z1 - wm) / (2L * z1.im * wm.im);
        if (t > X) continue;
        out.value += green_g(s, z1, wm);
        ++out.terms;
        if (t.to_double() > cutoff / 2) ++count_half;
        ++count_full;
      }
    }
  }
  // tail bound: counting N(t) <= 2 M t / X for t >= X (measured in the top
  // octave, doubled), Q_{s-1}(t) <= Q_{s-1}(X) (t/X)^{-s}
  double sre = s.to_double();
  if (sre <= 1.0) throw validation_error("green_GN: Re(s) > 1 required");
  double qx = legendre_Q_series(s - 1L, Real(cutoff)).to_double();
  double density = 2.0 * std::max<long>(count_half * 2, 8) ;
  out.tail_bound = 2.0 * density * qx * (1.0 + 1.0 / (sre - 1.0));
  return out;
}

GreenSum green_Gkf(long k, const std::vector<std::pair<long, double>>& principal_part, long N,
                   const Complex& z1, const Complex& z2, double cutoff) {
  if (k <= 1) throw validation_error("green_Gkf: k > 1 required");
  GreenSum out{Real(0L), 0.0, 0};
  for (auto& [m, cf] : principal_part) {
    if (m < 1) throw validation_error("green_Gkf: principal part indices are positive");
    if (cf == 0) continue;
    if (std::gcd(m, N) != 1)
      throw validation_error("green_Gkf: gcd(m, N) = 1 required for the coset sum");
    // T_m on z2: sum over a d = m, b mod d of G_k(z1, (a z2 + b)/d)
    Real mk = pow(Real(m), k - 1);
    for (long a = 1; a <= m; ++a) {
      if (m % a) continue;
      long dd = m / a;
      for (long b = 0; b < dd; ++b) {
        Complex w = (Complex(Real(a)) * z2 + Complex(Real(b))) / Complex(Real(dd));
        GreenSum part = green_GN(Real(k), N, z1, w, cutoff);
        out.value += Real(cf) * mk * part.value;
        out.tail_bound += std::abs(cf) * mk.to_double() * part.tail_bound;
        out.terms += part.terms;
      }
    }
  }
  return out;
}

CMCycle cm_cycle(long D1, long D2, long N) {
  if (!nt::is_fundamental(D1) || !nt::is_fundamental(D2) || D1 >= 0 || D2 >= 0 || D1 == D2)
    throw validation_error("cm_cycle: D1, D2 distinct negative fundamental discriminants");
  if (D1 % 2 == 0 && D2 % 2 == 0)
    throw validation_error("cm_cycle: D1, D2 must not both be even");
  long D0 = std::gcd(std::labs(D1), std::labs(D2));
  if (D0 % 2 == 0) throw validation_error("cm_cycle: gcd(D1, D2) must be odd");
  if (N % 2 == 0 || !nt::is_squarefree(N))
    throw validation_error("cm_cycle: N must be odd and squarefree");
  if (!nt::heegner_condition(D1, N) || !nt::heegner_condition(D2, N))
    throw validation_error("cm_cycle: Heegner condition fails");

  auto cl1 = bqf::class_group(D1);
  auto cl2 = bqf::class_group(D2);
  auto pts1 = bqf::heegner_points(D1, N);
  auto pts2 = bqf::heegner_points(D2, N);

  // admissible class pairs: genus characters at each p | D0 agree
  std::vector<long> d0p = nt::prime_divisors(D0);
  auto chi_vec = [&](const bqf::ClassGroup& cl, size_t i) {
    std::vector<int> v;
    for (long p : d0p) {
      long pstar = (p % 4 == 1) ? p : -p;
      v.push_back(bqf::genus_char(pstar, cl.reps[i]));
    }
    return v;
  };

  CMCycle out;
  out.D1 = D1;
  out.D2 = D2;
  out.N = N;
  out.image_size = 0;
  for (size_t s1 = 0; s1 < cl1.h(); ++s1) {
    auto v1 = chi_vec(cl1, s1);
    for (size_t s2 = 0; s2 < cl2.h(); ++s2) {
      if (v1 != chi_vec(cl2, s2)) continue;
      ++out.image_size;
      bqf::HeegnerPoint p1 = bqf::galois_conjugate(pts1, cl1, pts1.front(), s1);
      bqf::HeegnerPoint p2 = bqf::galois_conjugate(pts2, cl2, pts2.front(), s2);
      auto conj = [](const bqf::HeegnerPoint& p) {
        bqf::HeegnerPoint q = p;
        q.form.b = -q.form.b;  // -conj(tau)
        return q;
      };
      out.pairs.emplace_back(p1, p2);
      out.pairs.emplace_back(conj(p1), conj(p2));
      out.pairs.emplace_back(conj(p1), p2);
      out.pairs.emplace_back(p1, conj(p2));
    }
  }
  if (out.pairs.size() != 4 * out.image_size) throw error("cm_cycle: block count mismatch");
  if (D0 == 1 && out.image_size != cl1.h() * cl2.h())
    throw error("cm_cycle: coprime discriminants must give the full class product");
  return out;
}

NormCertificate cm_norm(long N, long D1, long D2, mpfr_prec_t prec) {
  if (N != 1 && N != 3 && N != 5 && N != 7 && N != 13)
    throw validation_error("cm_norm: N in {1,3,5,7,13}");
  CMCycle cyc = cm_cycle(D1, D2, N);

  auto product_at = [&](mpfr_prec_t wp) {
    ScopedPrecision sp(wp);
    std::vector<Complex> vals(cyc.pairs.size(), Complex{Real(1L)});
    parallel_for(cyc.pairs.size(), [&](size_t i) {
      ScopedPrecision sp2(wp);
      const auto& [p1, p2] = cyc.pairs[i];
      Complex v1 = qexp::hauptmodul_eval(N, p1.tau(wp));
      Complex v2 = qexp::hauptmodul_eval(N, p2.tau(wp));
      vals[i] = v1 - v2;
    });
    Complex prod{Real(1L)};
    for (const auto& v : vals) prod *= v;  // fixed order
    return prod;
  };

  // low-precision magnitude estimate, then rerun with headroom
  Complex probe = product_at(128);
  double log2mag = std::log2(std::max(abs(probe).to_double(), 1.0));
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(2 * (log2mag + 64));
  if (wp < 256) wp = 256;
  if (prec > wp) wp = prec;

  NormCertificate cert;
  cert.N = N;
  cert.D1 = D1;
  cert.D2 = D2;
  cert.cycle_size = cyc.pairs.size();
  for (int attempt = 0; attempt < 2; ++attempt) {
    ScopedPrecision sp(wp);
    Complex prod = product_at(wp);
    cert.precision = wp;
    cert.imag_residual = abs(prod.im).to_double();
    Real realness_tol = pow2(-static_cast<long>(wp) / 4) * (abs(prod) + Real(1L));
    if (!(abs(prod.im) < realness_tol))
      throw precision_error("cm_norm: product not real within tolerance");
    mpz_class nearest = round_to_mpz(prod.re);
    Real dist = abs(prod.re - Real(nearest));
    cert.nearest_integer = nearest;
    cert.distance = dist.to_double();
    Real mag = abs(prod);
    cert.product_log10 = (mag > 0L) ? (log(mag) / log(Real(10L))).to_double() : 0.0;
    if (dist.to_double() < 1e-10) {
      mpz_class an = abs(nearest);
      cert.factors = nt::factorize(an == 0 ? mpz_class(1) : an);
      cert.is_unit = (an == 1);
      return cert;
    }
    wp *= 2;  // precision retry
  }
  throw precision_error("cm_norm: integrality failed at distance " +
                        std::to_string(cert.distance));
}

}  // namespace cm
}  // namespace weillift
