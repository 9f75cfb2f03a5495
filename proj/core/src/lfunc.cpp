#include "weillift/lfunc.hpp"

#include <cmath>
#include <numeric>

#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"
#include "weillift/shintani.hpp"
#include "weillift/special.hpp"

namespace weillift {
namespace lfunc {

namespace {

// x^{-a} Gamma(a, x) for real x > 0
Complex hfun(const Complex& a, const Real& x) {
  return upper_gamma(a, x) * exp(-a * log(Complex(x)));
}

}  // namespace

LValue completed_Lambda(long D, const Complex& s) {
  if (!nt::is_fundamental(D)) throw validation_error("completed_Lambda: D must be fundamental");
  mpfr_prec_t prec = default_prec();
  long q = std::labs(D);
  int delta = D < 0 ? 1 : 0;
  Real pi = Real::pi();
  // xi(s) = (q/pi)^{(s+delta)/2} Gamma((s+delta)/2) L(s, chi); Lambda = q^{-delta/2} xi
  long nmax = static_cast<long>(std::sqrt(q * (prec * 0.6931 + 24) / M_PI)) + 2;
  Complex xi{Real(0L)};
  Complex half{Real(0.5)};
  for (long n = 1; n <= nmax; ++n) {
    int chi = nt::kronecker(D, n);
    if (chi == 0) continue;
    Real x = pi * n * n / q;
    Complex t1 = hfun((s + Complex(Real(delta))) * half, x);
    Complex t2 = hfun((Complex(Real(1L + delta)) - s) * half, x);
    Complex contrib = delta ? Real(n) * (t1 + t2) : (t1 + t2);
    xi += Real(chi) * contrib;
  }
  if (D == 1) {
    // completed zeta has the two pole terms
    Complex one{Real(1L)};
    if (abs(s).to_double() < 1e-30 || abs(s - one).to_double() < 1e-30)
      throw validation_error("completed_Lambda: pole of zeta at s = 0, 1");
    xi -= one / s;
    xi -= one / (one - s);
  }
  Real qf = pow(sqrt(Real(q)), -static_cast<long>(delta));
  double err = std::exp(-M_PI * static_cast<double>(nmax + 1) * (nmax + 1) / q + std::abs(s.re.to_double()));
  return {Complex(qf) * xi, err, "incomplete-gamma"};
}

LValue dirichlet_L(long D, const Complex& s) {
  long q = std::labs(D);
  int delta = D < 0 ? 1 : 0;
  LValue lam = completed_Lambda(D, s);
  // L = Lambda / (A^{s/2} Gamma_R(s + delta))
  Complex gr = nt::gamma_R(s + Complex(Real(delta)));
  Complex as2 = exp(s * Complex(log(Real(q)) / 2L));
  LValue out{lam.value / (gr * as2), lam.error, lam.method};
  return out;
}

int functional_equation_sign(const qexp::Newform& f) {
  if (!f.fricke) throw validation_error("functional_equation_sign: Fricke eigenvalue unknown");
  int k = static_cast<int>(f.weight / 2);
  return (k % 2 == 0 ? 1 : -1) * (*f.fricke);
}

LValue completed_modular_L(const qexp::Newform& f, const Complex& s, double cutoff) {
  mpfr_prec_t prec = default_prec();
  long w = f.weight;
  int sign = functional_equation_sign(f);
  Real rtN = sqrt(Real(f.level));
  Real two_pi = Real::pi() * 2L;
  double dN = std::sqrt(static_cast<double>(f.level));
  long needed = static_cast<long>(dN / (2 * M_PI * std::min(cutoff, 1.0 / cutoff)) *
                                  (prec * 0.6931 + 16 + std::abs(s.re.to_double()) * 4)) + 4;
  if (static_cast<long>(f.an.size()) < needed)
    throw precision_error("modular_L: " + std::to_string(needed) + " coefficients required, have " +
                          std::to_string(f.an.size()));
  Complex acc{Real(0L)};
  Real cut(cutoff);
  for (long n = 1; n <= needed; ++n) {
    const mpz_class& an = f.an[static_cast<size_t>(n - 1)];
    if (an == 0) continue;
    Real base = rtN / (two_pi * n);
    Real x1 = two_pi * n * cut / rtN;
    Real x2 = two_pi * n / (cut * rtN);
    Complex t1 = exp(s * Complex(log(base))) * upper_gamma(s, x1);
    Complex t2 = exp((Complex(Real(w)) - s) * Complex(log(base))) *
                 upper_gamma(Complex(Real(w)) - s, x2);
    Complex term = t1 + (sign > 0 ? t2 : -t2);
    acc += Real(an) * term;
  }
  double err = std::pow(2.0, -static_cast<double>(prec) * 0.5);
  return {acc, err, "afe"};
}

LValue modular_L(const qexp::Newform& f, const Complex& s, double cutoff) {
  LValue lam = completed_modular_L(f, s, cutoff);
  // L = Lambda / (N^{s/2} (2 pi)^{-s} Gamma(s))
  Real two_pi = Real::pi() * 2L;
  Complex den = exp(s * Complex(log(Real(f.level)) / 2L)) * exp(-s * Complex(log(two_pi))) *
                cgamma(s);
  return {lam.value / den, lam.error, lam.method};
}

// ---------------- Petersson norm ----------------

namespace {

// lift (c:d) in P^1(Z/N) to an SL2(Z) matrix with that bottom row mod N
std::array<long, 4> lift_coset(long c, long d, long N) {
  for (long dd = d;; dd += N) {
    if (std::gcd(std::labs(c), std::labs(dd)) == 1) {
      mpz_class g, u, v, cz(c), dz(dd);
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), cz.get_mpz_t(), dz.get_mpz_t());
      // a d - b c = 1 with a = v, b = -u
      return {v.get_si(), -u.get_si(), c, dd};
    }
    if (dd > d + 4 * N + 4) throw error("lift_coset: no coprime lift found");
  }
}

std::vector<std::array<long, 4>> gamma0_cosets(long N) {
  // representatives of Gamma_0(N) \ SL2(Z) indexed by P^1(Z/N)
  std::vector<std::array<long, 4>> reps;
  std::vector<std::pair<long, long>> classes;
  auto canon = [N](long c, long d) {
    // canonical representative of (c:d) under units mod N
    std::pair<long, long> best{-1, -1};
    for (long u = 1; u < N; ++u) {
      if (std::gcd(u, N) != 1) continue;
      std::pair<long, long> cand{(c * u) % N, (d * u) % N};
      if (best.first < 0 || cand < best) best = cand;
    }
    return best;
  };
  std::vector<std::pair<long, long>> seen;
  for (long c = 0; c < N; ++c)
    for (long d = 0; d < N; ++d) {
      if (std::gcd(std::gcd(c, d), N) != 1) continue;
      auto key = canon(c, d);
      bool dup = false;
      for (auto& s : seen)
        if (s == key) {
          dup = true;
          break;
        }
      if (dup) continue;
      seen.push_back(key);
      long cc = key.first == 0 ? 0 : key.first;
      long dd = key.second == 0 ? (cc == 0 ? 1 : N) : key.second;
      if (cc == 0 && dd == 0) continue;
      reps.push_back(lift_coset(cc, dd == 0 ? N : dd, N));
    }
  if (N == 1) return {{1, 0, 0, 1}};
  return reps;
}

}  // namespace

Real petersson_norm_sq(const std::function<Complex(const Complex&)>& f, const mpq_class& weight,
                       long level, unsigned xnodes, double ymax) {
  auto reps = gamma0_cosets(level);
  const GLRule& rx = gauss_legendre(xnodes);
  const GLRule& ry = gauss_legendre(16);
  Real w(weight);
  Real total(0L);
  for (size_t i = 0; i < rx.nodes.size(); ++i) {
    Real x = rx.nodes[i] / 2L;  // [-1/2, 1/2]
    Real ylow = sqrt(Real(1L) - x * x);
    // geometric panels in y
    std::vector<double> cuts{ylow.to_double()};
    double y = 1.0;
    while (y < ymax) {
      if (y > cuts.back()) cuts.push_back(y);
      y *= 1.6;
    }
    cuts.push_back(ymax);
    Real colsum(0L);
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
      Real a(cuts[p]), b(cuts[p + 1]);
      Real mid = (a + b) / 2L, half = (b - a) / 2L;
      for (size_t jy = 0; jy < ry.nodes.size(); ++jy) {
        Real yy = mid + half * ry.nodes[jy];
        Complex z{x, yy};
        Real g(0L);
        for (const auto& rep : reps) {
          Complex den = Complex(Real(rep[2])) * z + Complex(Real(rep[3]));
          Complex gz = (Complex(Real(rep[0])) * z + Complex(Real(rep[1]))) / den;
          Complex val = f(gz);
          g += norm2(val) * pow(gz.im, w);
        }
        colsum += ry.weights[jy] * half * g / (yy * yy);
      }
    }
    total += rx.weights[i] * colsum / 2L;
  }
  return total;
}

Real gamma0_area(long level, unsigned xnodes, double ymax) {
  auto reps = gamma0_cosets(level);
  const GLRule& rx = gauss_legendre(xnodes);
  Real total(0L);
  for (size_t i = 0; i < rx.nodes.size(); ++i) {
    Real x = rx.nodes[i] / 2L;
    Real ylow = sqrt(Real(1L) - x * x);
    // integral of dy/y^2 from ylow to ymax
    total += rx.weights[i] * (1L / ylow - Real(1.0 / ymax)) / 2L;
  }
  return total * static_cast<long>(reps.size());
}

// ---------------- Rankin-Selberg constants ----------------

Complex C_k(long k, const Complex& s) {
  if (k < 1 || k % 2 == 0) throw validation_error("C_k: odd k >= 1 required");
  mpq_class b = qexp::binom_q(mpq_class(-k, 2), static_cast<unsigned>((k - 1) / 2));
  Real pi = Real::pi();
  Complex p = exp((-Complex(Real(k)) - s - Complex(Real(0.5))) * Complex(log(pi)));
  Complex g = cgamma(Complex(Real(k)) + s) / cgamma(Complex(Real(1L)) + s);
  Complex g2 = cgamma(s / 2L + Complex(Real(1L)));
  Real two = pow2(3 - 3 * k);
  return Real(b) * two * p * g * g2;
}

namespace {

Complex pow_c(long p, const Complex& e) { return exp(e * Complex(log(Real(p)))); }

void pole_guard(long p, const Complex& s) {
  Complex den = Complex(Real(1L)) - pow_c(p, -Complex(Real(1L)) - s);
  if (abs(den).to_double() < 1e-40)
    throw validation_error("gamma_p: pole at p^{-1-s} = 1");
}

}  // namespace

Complex gamma_p0(const qexp::Newform& G0, long p, const Complex& s) {
  pole_guard(p, s);
  long k = G0.k();
  Complex one{Real(1L)};
  Complex den = one - pow_c(p, -one - s);
  Complex ap{Real(G0.a(p))};
  Complex t1 = -pow_c(p, -Complex(Real(k)) - s) / den * ap;
  Complex num = (one + Complex(Real(mpq_class(1, p)))) * pow_c(p, -2L * s) -
                (Complex(Real(3L)) + Complex(Real(mpq_class(1, p)))) * pow_c(p, -s) +
                Complex(Real(2L * p));
  Complex t2 = num / (Complex(Real(p - 1)) * den);
  return t1 + t2;
}

Complex gamma_p1(const qexp::Newform& G0, long p, const Complex& s) {
  pole_guard(p, s);
  long k = G0.k();
  Complex one{Real(1L)};
  Complex den = one - pow_c(p, -one - s);
  Complex ap{Real(G0.a(p))};
  Complex inner1 = (pow_c(p, -2L * s) - 2L * pow_c(p, one - s) + Complex(Real(p))) /
                   (Complex(Real(p - 1)) * den) * ap;
  Complex inner2 = Real(pow(Real(p), k)) * (one + pow_c(p, -s)) / den;
  return Real(pow(Real(p), -2 * k)) * (inner1 + inner2);
}

Complex delta_d(const qexp::Newform& G0, long d, const Complex& s) {
  if (d < 1) throw validation_error("delta_d: d >= 1");
  Complex out = nt::partial_zeta(d, s + Complex(Real(1L)));
  long k = G0.k();
  for (long p : nt::prime_divisors(d)) {
    Complex ap{Real(G0.a(p))};
    out *= ap - Real(pow(Real(p), k - 1)) * (Complex(Real(1L)) + pow_c(p, -s));
  }
  return out;
}

RankinResult rankin_selberg_L(const qexp::Newform& G0, long N3, long N, long D1, long D2,
                              const Complex& s, std::optional<int> fricke_override,
                              double trace_tol) {
  long k = G0.k();
  if (k % 2 == 0) throw validation_error("rankin_selberg_L: odd k required");
  if (N < 1 || N % 2 == 0 || !nt::is_squarefree(N))
    throw validation_error("rankin_selberg_L: N must be odd and squarefree");
  if (!nt::is_fundamental(D1) || !nt::is_fundamental(D2) || D1 == D2 || D1 >= 0 || D2 >= 0)
    throw validation_error("rankin_selberg_L: D1, D2 distinct negative fundamental");
  if (D1 % 2 == 0 && D2 % 2 == 0)
    throw validation_error("rankin_selberg_L: D1, D2 must not both be even");
  if (!nt::heegner_condition(D1, N) || !nt::heegner_condition(D2, N))
    throw validation_error("rankin_selberg_L: Heegner condition fails");
  if (N % (G0.level * N3) != 0 || (N / G0.level) % N3 != 0)
    throw validation_error("rankin_selberg_L: need N0 N3 | N with N3 | N/N0");

  int eps = fricke_override ? *fricke_override
                            : (G0.fricke ? *G0.fricke
                                         : qexp::fricke_eigenvalue(G0));
  RankinResult out;
  out.factors["one_plus_eps"] = Complex(Real(1L + eps));
  if (eps == -1) {
    out.value = Complex{Real(0L)};
    out.error = 0;
    out.identically_zero = true;
    return out;
  }
  out.identically_zero = false;
  // the supplied sign governs the whole assembly, including the AFE sign
  qexp::Newform G = G0;
  G.fricke = eps;

  // twisted trace on the odd discriminant
  long Dodd = (D1 % 2 != 0) ? D1 : D2;
  long Dother = (Dodd == D1) ? D2 : D1;
  shintani::TwistedTrace tr = shintani::twisted_trace(G0, Dodd, std::labs(Dother), trace_tol);
  out.factors["trace"] = tr.value;

  // pinned normalization 2^{k+1} (-1)^{k-1+floor(k/2)} |Dother|^{(1-k)/2}
  Real norm_const = pow2(k + 1);
  if ((k - 1 + k / 2) % 2) norm_const = -norm_const;
  norm_const *= pow(sqrt(Real(std::labs(Dother))), 1 - k);
  out.factors["norm_const"] = Complex(norm_const);

  LValue lg = modular_L(G, s + Complex(Real(k)));
  out.factors["L_G0"] = lg.value;
  Complex ck = C_k(k, s);
  out.factors["C_k"] = ck;
  Complex zr = nt::partial_zeta(N, s + Complex(Real(1L))) /
               nt::partial_zeta(N, Complex(Real(1L)));
  out.factors["zeta_ratio"] = zr;
  LValue l1 = completed_Lambda(D1, s + Complex(Real(1L)));
  LValue l2 = completed_Lambda(D2, s + Complex(Real(1L)));
  out.factors["Lambda_chi1"] = l1.value;
  out.factors["Lambda_chi2"] = l2.value;

  Complex gprod0{Real(1L)};
  for (long p : nt::prime_divisors(N / (G0.level * N3))) {
    Complex g = gamma_p0(G0, p, s);
    out.factors["gamma0_p" + std::to_string(p)] = g;
    gprod0 *= g;
  }
  Complex gprod1{Real(1L)};
  for (long p : nt::prime_divisors(N3)) {
    Complex g = gamma_p1(G0, p, s);
    out.factors["gamma1_p" + std::to_string(p)] = g;
    gprod1 *= g;
  }

  out.value = Complex(Real(1L + eps)) * Complex(norm_const) * tr.value * lg.value * ck * zr *
              gprod0 * gprod1 / (l1.value * l2.value);
  double trrel = tr.error / std::max(abs(tr.value).to_double(), 1e-300);
  out.error = abs(out.value).to_double() * (trrel + lg.error + l1.error + l2.error + 1e-30);
  return out;
}

}  // namespace lfunc
}  // namespace weillift
