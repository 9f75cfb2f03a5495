#include "weillift/forms.hpp"

#include <cmath>
#include <numeric>

#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"
#include "weillift/special.hpp"

namespace weillift {
namespace qexp {

QExpansion eisenstein(unsigned k, long order) {
  if (k < 4 || k % 2) throw validation_error("eisenstein: k even >= 4");
  QExpansion e(1, 0, order, mpq_class(static_cast<long>(k)), 1);
  e.at(0) = 1;
  mpq_class factor = mpq_class(-2L * k) / bernoulli(k);
  for (long n = 1; n <= order; ++n) {
    mpz_class s(0);
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) {
        mpz_class dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), d, k - 1);
        s += dk;
      }
    e.at(n) = factor * mpq_class(s);
  }
  return e;
}

QExpansion delta_qexp(long order) {
  QExpansion d = eta_qexp(24 * (order + 1)).pow(24).normalized();
  d = d.truncated(std::min(d.nmax(), order));
  d.set_weight(mpq_class(12));
  d.set_level(1);
  return d;
}

QExpansion j_invariant(long order) {
  QExpansion e4 = eisenstein(4, order + 2);
  QExpansion j = e4.pow(3) * delta_qexp(order + 2).inverse();
  j = j.truncated(std::min(j.nmax(), order)).normalized();
  j.set_weight(mpq_class(0));
  return j;
}

QExpansion hauptmodul_qexp(long N, long order) {
  if (N != 3 && N != 5 && N != 7 && N != 13)
    throw validation_error("hauptmodul: N in {3,5,7,13}");
  int e = static_cast<int>(24 / (N - 1));
  EtaQuotient q;
  q.exponents[1] = e;
  q.exponents[N] = -e;
  q.level_hint = N;
  QExpansion r = q.expansion(order + 2).normalized();
  if (r.den() != 1 || r.n0() != -1)
    throw error("hauptmodul: expansion should start at q^{-1} with integer exponents");
  r = r.truncated(std::min(r.nmax(), order));
  r.set_weight(mpq_class(0));
  r.set_level(N);
  return r;
}

Complex hauptmodul_eval(long N, const Complex& tau) {
  if (N == 1) {
    // j from eta quotients: j = (E4)^3/Delta with E4 = (eta(t)^16/eta(2t)^8 + 2^8 eta(2t)^16/eta(t)^8)
    // simpler: evaluate via the expansion after full SL2 reduction
    static thread_local long cached_prec = 0;
    static thread_local QExpansion jq;
    long need = static_cast<long>(default_prec() / 4) + 24;
    if (cached_prec < need) {
      jq = j_invariant(need);
      cached_prec = need;
    }
    Gamma0Reduced r = gamma0_reduce(tau, 1);
    return jq.eval_direct(r.tau);
  }
  if (N != 3 && N != 5 && N != 7 && N != 13)
    throw validation_error("hauptmodul: N in {1,3,5,7,13}");
  int e = static_cast<int>(24 / (N - 1));
  EtaQuotient q;
  q.exponents[1] = e;
  q.exponents[N] = -e;
  return q.eval(tau);
}

mpz_class Newform::a(long n) const {
  if (n < 1 || static_cast<size_t>(n) > an.size())
    throw validation_error("Newform: coefficient " + std::to_string(n) + " not available (have " +
                           std::to_string(an.size()) + ")");
  return an[static_cast<size_t>(n - 1)];
}

QExpansion Newform::expansion(long order) const {
  QExpansion f(1, 1, std::min<long>(order, static_cast<long>(an.size())), mpq_class(weight), level);
  for (long n = 1; n <= f.nmax(); ++n) f.at(n) = mpq_class(an[static_cast<size_t>(n - 1)]);
  return f;
}

void Newform::check_eigenvalues(long bound) const {
  bound = std::min<long>(bound, static_cast<long>(an.size()));
  if (a(1) != 1) throw validation_error("Newform: a(1) != 1");
  for (long m = 2; m <= bound; ++m)
    for (long n = 2; m * n <= bound; ++n)
      if (std::gcd(m, n) == 1 && a(m * n) != a(m) * a(n))
        throw validation_error("Newform: multiplicativity fails at " + std::to_string(m) + "," +
                               std::to_string(n));
  for (long p = 2; p * p <= bound; ++p) {
    if (!nt::is_probable_prime(mpz_class(p)) || level % p == 0) continue;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), p, weight - 1);
    for (long q = p * p; q <= bound; q *= p) {
      long r = q / p;
      if (a(q) != a(p) * a(r) - pw * a(r / p))
        throw validation_error("Newform: Hecke recurrence fails at p^k = " + std::to_string(q));
    }
  }
}

Newform builtin_delta(long nterms) {
  Newform f;
  f.level = 1;
  f.weight = 12;
  f.name = "delta";
  f.fricke = 1;
  EtaQuotient q;
  q.exponents[1] = 24;
  q.level_hint = 1;
  f.eta = q;
  QExpansion d = delta_qexp(nterms);
  for (long n = 1; n <= nterms; ++n) f.an.push_back(d.coeff(n).get_num());
  return f;
}

Newform builtin_eta6_3(long nterms) {
  Newform f;
  f.level = 3;
  f.weight = 6;
  f.name = "eta6-3";
  EtaQuotient q;
  q.exponents[1] = 6;
  q.exponents[3] = 6;
  q.level_hint = 3;
  f.eta = q;
  QExpansion e = q.expansion(nterms).normalized();
  for (long n = 1; n <= std::min(nterms, e.nmax()); ++n) f.an.push_back(e.coeff(n).get_num());
  // Fricke eigenvalue pinned numerically at construction
  f.fricke = fricke_eigenvalue(f);
  return f;
}

// ---------------- reduction and evaluation ----------------

Gamma0Reduced gamma0_reduce(const Complex& tau0, long N) {
  Gamma0Reduced r{1, 0, 0, 1, tau0};
  auto apply_best = [&](long Kmax) {
    // one improvement pass: find (c,d), c = N k, minimizing |c tau + d|^2 < 1
    Real best(1L);
    long bc = 0, bd = 1;
    for (long k = -Kmax; k <= Kmax; ++k) {
      long c = N * k;
      if (c == 0) continue;
      // d near -c x
      Real target = Real(-c) * r.tau.re;
      long d0 = round_to_mpz(target).get_si();
      for (long d = d0 - 2; d <= d0 + 2; ++d) {
        if (std::gcd(std::labs(c), std::labs(d)) != 1) continue;
        Real nrm = norm2(Complex(Real(c)) * r.tau + Complex(Real(d)));
        if (nrm < best) {
          best = nrm;
          bc = c;
          bd = d;
        }
      }
    }
    if (bc == 0) return false;
    // complete to [[a,b],[c,d]] in SL2
    mpz_class g, u, v;
    mpz_class cz(bc), dz(bd);
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), cz.get_mpz_t(), dz.get_mpz_t());
    // a d - b c = 1 with a = v, b = -u
    long a = v.get_si(), b = -u.get_si();
    Complex num = Complex(Real(a)) * r.tau + Complex(Real(b));
    Complex den = Complex(Real(bc)) * r.tau + Complex(Real(bd));
    Complex nt = num / den;
    // compose into r: new matrix [[a,b],[c,d]] * old
    long na = a * r.a + b * r.c, nb = a * r.b + b * r.d;
    long nc = bc * r.a + bd * r.c, nd = bc * r.b + bd * r.d;
    r.a = na;
    r.b = nb;
    r.c = nc;
    r.d = nd;
    r.tau = nt;
    return true;
  };
  for (int guard = 0; guard < 4000; ++guard) {
    // translate x into [-1/2, 1/2]: left-multiply by [[1,-t],[0,1]]
    long t = round_to_mpz(r.tau.re).get_si();
    if (t != 0) {
      r.tau.re -= Real(t);
      r.a -= t * r.c;
      r.b -= t * r.d;
    }
    if (!apply_best(8)) {
      if (!apply_best(64)) break;
    }
  }
  return r;
}

Complex evaluate_qexp(const QExpansion& f, const Complex& tau, long N,
                      std::optional<int> fricke, const EvalOptions& opt) {
  if (f.weight().get_den() != 1)
    throw validation_error("evaluate_qexp: integer weight required for q-series route");
  long w = f.weight().get_num().get_si();
  Gamma0Reduced r = gamma0_reduce(tau, N);
  auto require_terms = [&](double y) {
    long need = static_cast<long>(std::ceil(default_prec() * 0.6931 / (2 * M_PI * y))) + 8;
    if (f.nmax() < need)
      throw precision_error("evaluate_qexp: " + std::to_string(need) +
                            " coefficients required, have " + std::to_string(f.nmax()));
  };
  if (r.tau.im.to_double() >= opt.min_height) {
    require_terms(r.tau.im.to_double());
    Complex val = f.eval_direct(r.tau);
    Complex den = Complex(Real(r.c)) * tau + Complex(Real(r.d));
    return val / pow(den, w);
  }
  if (fricke) {
    // f(tau) = eps^{-1} N^{-w/2} tau^{-w} f(-1/(N tau))
    Complex wt = Complex(Real(-1L)) / (Complex(Real(N)) * tau);
    Gamma0Reduced r2 = gamma0_reduce(wt, N);
    if (r2.tau.im.to_double() >= opt.min_height) {
      require_terms(r2.tau.im.to_double());
      Complex val = f.eval_direct(r2.tau);
      Complex den = Complex(Real(r2.c)) * wt + Complex(Real(r2.d));
      Complex fw = val / pow(den, w);
      Real nf = pow(sqrt(Real(static_cast<long>(N))), w);
      Complex out = fw / (Complex(nf) * pow(tau, w));
      return *fricke == 1 ? out : -out;
    }
  }
  throw precision_error("evaluate_qexp: reduction reached height " +
                        std::to_string(std::max(r.tau.im.to_double(), 0.0)) +
                        " below target " + std::to_string(opt.min_height));
}

Complex evaluate_newform(const Newform& f, const Complex& tau, const EvalOptions& opt) {
  if (f.eta) return f.eta->eval(tau);
  QExpansion e = f.expansion(static_cast<long>(f.an.size()));
  return evaluate_qexp(e, tau, f.level, f.fricke, opt);
}

int fricke_eigenvalue(const std::function<Complex(const Complex&)>& f, long N,
                      const mpq_class& weight, double* residual_out) {
  double pts[][2] = {{0.137, 0.81}, {-0.22, 0.69}, {0.05, 1.13}};
  int found = 0;
  double worst = 0;
  for (auto& p : pts) {
    Complex tau{Real(p[0]), Real(p[1])};
    Complex lhs = f(Complex(Real(-1L)) / (Complex(Real(N)) * tau));
    Complex ftau = f(tau);
    if (abs(ftau).to_double() < 1e-12) continue;  // retry on near-zero values
    // eps = lhs / (N^{w/2} tau^w f(tau))
    Real nw = pow(sqrt(Real(N)), Real(weight));
    Complex tw = exp(Complex(Real(weight)) * log(tau));
    Complex eps = lhs / (Complex(nw) * tw * ftau);
    double re = eps.re.to_double(), im = eps.im.to_double();
    int sign = re >= 0 ? 1 : -1;
    double resid = std::hypot(re - sign, im);
    worst = std::max(worst, resid);
    if (resid > 1e-6)
      throw precision_error("fricke_eigenvalue: inconsistent residual " + std::to_string(resid));
    if (found && sign != found)
      throw precision_error("fricke_eigenvalue: sign varies across sample points");
    found = sign;
  }
  if (!found) throw precision_error("fricke_eigenvalue: all sample values near zero");
  if (residual_out) *residual_out = worst;
  return found;
}

int fricke_eigenvalue(const Newform& f, double* residual_out) {
  return fricke_eigenvalue([&](const Complex& t) { return evaluate_newform(f, t); }, f.level,
                           mpq_class(f.weight), residual_out);
}

TraceResult trace_down(const std::function<Complex(const Complex&)>& f, long w, long N,
                       long Nprime, long nmax, double y0) {
  if (N % Nprime != 0 || !nt::is_squarefree(N))
    throw validation_error("trace_down: need squarefree N and N' | N");
  // coset representatives of Gamma_0(N) \ Gamma_0(N') built prime by prime
  struct Rep {
    long a, b, c, d;
  };
  std::vector<Rep> reps{{1, 0, 0, 1}};
  long M = N;
  for (long p : nt::prime_divisors(N / Nprime)) {
    long Mp = M / p;  // trace from level M to level Mp
    std::vector<Rep> step{{1, 0, 0, 1}};
    for (long j = 0; j < p; ++j) {
      // bottom row (c, d) = (Mp, d) with d = j mod p, gcd(d, Mp) = 1
      long d = j;
      while (std::gcd(std::labs(d), std::labs(Mp)) != 1) d += p;
      mpz_class g, u, v, cz(Mp), dz(d);
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), cz.get_mpz_t(), dz.get_mpz_t());
      step.push_back({v.get_si(), -u.get_si(), Mp, d});
    }
    std::vector<Rep> next;
    for (const auto& r : reps)
      for (const auto& s : step)
        next.push_back({r.a * s.a + r.b * s.c, r.a * s.b + r.b * s.d, r.c * s.a + r.d * s.c,
                        r.c * s.b + r.d * s.d});
    reps = std::move(next);
    M = Mp;
  }
  long S = 2 * nmax + 33;  // sample count
  std::vector<Complex> vals(static_cast<size_t>(S));
  for (long l = 0; l < S; ++l) {
    Complex z{Real(l) / S + Real(1) / (2L * S * S), Real(y0)};
    Complex acc{Real(0L)};
    for (const auto& r : reps) {
      Complex den = Complex(Real(r.c)) * z + Complex(Real(r.d));
      Complex gz = (Complex(Real(r.a)) * z + Complex(Real(r.b))) / den;
      acc += f(gz) / pow(den, w);
    }
    vals[static_cast<size_t>(l)] = acc;
  }
  TraceResult out;
  out.coeffs.resize(static_cast<size_t>(nmax));
  Real twopiy(2.0 * y0);
  twopiy *= Real::pi();
  for (long n = 1; n <= nmax; ++n) {
    Complex c{Real(0L)};
    for (long l = 0; l < S; ++l) {
      Complex z{Real(l) / S + Real(1) / (2L * S * S), Real(0L)};
      c += vals[static_cast<size_t>(l)] * e2pi(Real(-n) * z.re);
    }
    c = c / S;
    c *= Complex(exp(Real(n) * twopiy));
    out.coeffs[static_cast<size_t>(n - 1)] = c;
  }
  // aliasing estimate: the n+S mode folded back, bounded via trivial growth
  out.error = static_cast<double>(reps.size()) * std::exp(-2.0 * M_PI * y0 * (S - nmax)) * 1e3;
  return out;
}

}  // namespace qexp
}  // namespace weillift
