#include "weillift/shintani.hpp"

#include <cmath>
#include <numeric>

#include "weillift/errors.hpp"
#include "weillift/lfunc.hpp"
#include "weillift/numtheory.hpp"
#include "weillift/parallel.hpp"
#include "weillift/special.hpp"

namespace weillift {
namespace shintani {

namespace {

struct Geodesic {
  // z(s) = m + r (tanh s + i sech s) for semicircles, x0 + i e^s for lines
  bool vertical;
  Real m, r;       // center and radius (semicircle)
  Real x0;         // vertical line position
  int orient;      // +1: traverse in increasing s, -1: decreasing

  Complex point(const Real& s) const {
    if (vertical) return {x0, exp(s)};
    Real ch = cosh(s);
    return {m + r * tanh(s), r / ch};
  }
  Complex speed(const Real& s) const {  // dz/ds
    if (vertical) return {Real(0L), exp(s)};
    Real sech = 1L / cosh(s);
    Real th = tanh(s);
    return {r * sech * sech, -(r * sech * th)};
  }
};

Geodesic geodesic_of(const bqf::BQF& Q) {
  Geodesic g;
  long D = Q.disc();
  if (Q.a != 0) {
    g.vertical = false;
    g.m = Real(-Q.b) / (2 * Q.a);
    g.r = sqrt(Real(D)) / (2 * std::labs(Q.a));
    // oriented from w' = (-b - sqrt D)/(2a) to w = (-b + sqrt D)/(2a):
    // left-to-right when a > 0
    g.orient = Q.a > 0 ? 1 : -1;
  } else {
    g.vertical = true;
    g.x0 = Real(-Q.c) / Q.b;
    // from -c/b up to i inf when b > 0
    g.orient = Q.b > 0 ? 1 : -1;
  }
  return g;
}

struct PanelIntegrand {
  const Evaluator& G;
  long k1;  // power k-1
  const bqf::BQF& Q;
  const Geodesic& geo;

  Complex operator()(const Real& s) const {
    Complex z = geo.point(s);
    Complex qz = Complex(Real(Q.a)) * z * z + Complex(Real(Q.b)) * z + Complex(Real(Q.c));
    return G(z) * pow(qz, k1) * geo.speed(s);
  }
};

// adaptive GL32 with bisection error control
struct PanelResult {
  Complex value;
  double error;
};

PanelResult gl_panel(const PanelIntegrand& f, const Real& a, const Real& b) {
  const GLRule& rule = gauss_legendre(32);
  Real mid = (a + b) / 2L, half = (b - a) / 2L;
  Complex acc{Real(0L)};
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  acc *= Complex(half);
  return {acc, 0.0};
}

PanelResult adaptive(const PanelIntegrand& f, const Real& a, const Real& b, double tol,
                     int depth) {
  PanelResult whole = gl_panel(f, a, b);
  Real mid = (a + b) / 2L;
  PanelResult l = gl_panel(f, a, mid), r = gl_panel(f, mid, b);
  double diff = abs(l.value + r.value - whole.value).to_double();
  if (diff < tol || depth > 14)
    return {l.value + r.value, diff + l.error + r.error};
  PanelResult lr = adaptive(f, a, mid, tol / 2, depth + 1);
  PanelResult rr = adaptive(f, mid, b, tol / 2, depth + 1);
  return {lr.value + rr.value, lr.error + rr.error};
}

}  // namespace

CycleIntegral cycle_integral(const Evaluator& G, long weight, long N, const bqf::BQF& Q,
                             double tol) {
  long D = Q.disc();
  if (D <= 0) throw validation_error("cycle_integral: disc(Q) must be positive");
  if (weight % 2 || weight < 2) throw validation_error("cycle_integral: even weight >= 2");
  long k = weight / 2;
  Geodesic geo = geodesic_of(Q);
  PanelIntegrand f{G, k - 1, Q, geo};

  long e = 0;
  {
    mpz_class dz(D), rt;
    if (mpz_perfect_square_p(dz.get_mpz_t())) {
      mpz_sqrt(rt.get_mpz_t(), dz.get_mpz_t());
      e = rt.get_si();
    }
  }

  Complex total{Real(0L)};
  double err = 0;
  if (e == 0) {
    // closed geodesic: z(0) to M z(0) for M the automorph of the PRIMITIVE
    // part of Q (an imprimitive form has the same stabilizer as its
    // primitive part; the discriminant-D Pell unit would wrap the cycle
    // content times)
    long g = Q.content();
    bqf::BQF Q0{Q.a / g, Q.b / g, Q.c / g};
    long D0 = Q0.disc();
    auto [t, u] = bqf::pell_tu(D0);
    Real eps = (Real(t) + Real(u) * sqrt(Real(D0))) / 2L;
    Real L = 2L * log(eps);
    // sanity: the automorph must land on z(+-L)
    {
      bqf::Mat22 M = bqf::pell_automorph(Q0);
      Complex z0 = geo.point(Real(0L));
      Complex num = Complex(Real(M.a)) * z0 + Complex(Real(M.b));
      Complex den = Complex(Real(M.c)) * z0 + Complex(Real(M.d));
      Complex z1 = num / den;
      Real d1 = abs(geo.point(L) - z1), d2 = abs(geo.point(-L) - z1);
      if (std::min(d1.to_double(), d2.to_double()) / (abs(z1).to_double() + 1.0) > 1e-6)
        throw error("cycle_integral: automorph endpoint mismatch");
    }
    // one period traversed in the orientation of the form (w' -> w); the
    // integrand is L-periodic, so the traversal direction carries the sign
    Real s1 = geo.orient > 0 ? L : -L;
    long panels = std::max<long>(4, static_cast<long>(std::ceil(std::abs(s1.to_double()) * 1.2)));
    for (long j = 0; j < panels; ++j) {
      Real a = s1 * j / panels, b = s1 * (j + 1) / panels;
      PanelResult pr = adaptive(f, a, b, tol / panels, 0);
      total += pr.value;
      err += pr.error;
    }
    return {Q, N, total, err};
  } else {
    // infinite geodesic between rational points; integrand decays at both
    // ends because G is cuspidal and Q(z,1) vanishes at the endpoints
    double scale = 0;
    Complex acc{Real(0L)};
    auto add_segment = [&](double lo, double hi) {
      PanelResult pr = adaptive(f, Real(lo), Real(hi), tol, 0);
      acc += pr.value;
      err += pr.error;
      scale = std::max(scale, abs(pr.value).to_double());
      return abs(pr.value).to_double();
    };
    add_segment(-1, 1);
    for (int dir : {1, -1}) {
      double pos = 1;
      int quiet = 0;
      for (int step = 0; step < 60 && quiet < 2; ++step) {
        double lo = dir > 0 ? pos : -pos - 1;
        double hi = dir > 0 ? pos + 1 : -pos;
        double mag = add_segment(lo, hi);
        if (mag < tol * std::max(1.0, scale))
          ++quiet;
        else
          quiet = 0;
        pos += 1;
      }
      if (quiet < 2) throw convergence_error("cycle_integral: tail did not decay");
      err += tol;  // tail allowance
    }
    total = acc;
  }
  if (geo.orient < 0) total = -total;
  return {Q, N, total, err};
}

TwistedTrace twisted_trace(const qexp::Newform& G0, long Delta, long m, double tol) {
  long k = G0.k();
  if (!nt::is_fundamental(Delta))
    throw validation_error("twisted_trace: Delta must be a fundamental discriminant");
  long sgn = (k % 2 == 0) ? 1 : -1;
  if (sgn * Delta <= 0)
    throw validation_error("twisted_trace: need (-1)^k Delta > 0");
  if (m < 1) throw validation_error("twisted_trace: m >= 1");
  long N0 = G0.level;
  if (std::gcd(N0, 2 * std::labs(Delta)) != 1)
    throw validation_error("twisted_trace: level must be coprime to 2 Delta");

  // support: (-1)^k m = disc/Delta must be 0 or 1 mod 4 (chi_Delta defined)
  long sm = ((sgn * m) % 4 + 4) % 4;
  if (sm == 2 || sm == 3) return {Complex{Real(0L)}, 0.0, 0};
  long disc = std::labs(Delta) * m;

  auto classes = bqf::gamma0_classes(disc, N0);
  Evaluator ev = [&](const Complex& z) { return qexp::evaluate_newform(G0, z); };
  std::vector<Complex> vals(classes.size(), Complex{Real(0L)});
  std::vector<double> errs(classes.size(), 0.0);
  parallel_for(classes.size(), [&](size_t i) {
    int chi = bqf::genus_char(Delta, classes[i]);
    if (chi == 0) return;
    CycleIntegral ci = cycle_integral(ev, G0.weight, N0, classes[i], tol);
    vals[i] = Real(static_cast<long>(chi)) * ci.value;
    errs[i] = ci.error;
  });
  Complex sum{Real(0L)};
  double err = 0;
  for (size_t i = 0; i < classes.size(); ++i) {
    sum += vals[i];
    err += errs[i];
  }
  Real front = pow(sqrt(Real(std::labs(Delta))), 1 - k);
  if (k % 2 == 0) front = -front;  // (-1)^{k-1}
  return {Complex(front) * sum, err * std::abs(front.to_double()), static_cast<long>(classes.size())};
}

ShintaniRatio shintani_coeff_ratio(const qexp::Newform& G0, long Delta, long m1, long m2,
                                   double tol) {
  TwistedTrace t1 = twisted_trace(G0, Delta, m1, tol);
  TwistedTrace t2 = twisted_trace(G0, Delta, m2, tol);
  double mag2 = abs(t2.value).to_double();
  if (mag2 < 10 * t2.error || mag2 == 0)
    throw precision_error("shintani_coeff_ratio: denominator trace within error of zero");
  Complex ratio = t1.value / t2.value;
  double rel = t1.error / std::max(abs(t1.value).to_double(), 1e-300) + t2.error / mag2;
  return {ratio, abs(ratio).to_double() * rel};
}

double KohnenCheck::gap() const { return abs(lhs - rhs).to_double(); }

KohnenCheck kohnen_series_check(const qexp::Newform& G0, long d, long D2, const Complex& s,
                                long nmax) {
  long k = G0.k();
  long sgn = (k % 2 == 0) ? 1 : -1;
  if (!nt::is_fundamental(D2) || sgn * D2 <= 0)
    throw validation_error("kohnen_series_check: need fundamental D2 with (-1)^k D2 > 0");
  if (G0.level % d != 0) throw validation_error("kohnen_series_check: d must divide the level");
  if (d > 1 && !nt::heegner_condition(D2, d))
    throw validation_error("kohnen_series_check: d fails the Heegner condition for D2");

  long aD2 = std::labs(D2);
  TwistedTrace base = twisted_trace(G0, D2, aD2);
  double bmag = abs(base.value).to_double();
  if (bmag < 10 * base.error || bmag == 0)
    throw precision_error("kohnen_series_check: c(|D2|) trace within error of zero");

  KohnenCheck out;
  out.lhs = Complex{Real(0L)};
  out.lhs_error = 0;
  for (long n = 1; n <= nmax; ++n) {
    TwistedTrace tn = twisted_trace(G0, D2, d * d * n * n * aD2);
    Complex ratio = tn.value / base.value;
    Complex term = ratio / exp((Complex(Real(k)) + s) * log(Complex(Real(n))));
    out.lhs += term;
    out.lhs_error += (tn.error / bmag + abs(ratio).to_double() * base.error / bmag) /
                     std::pow(n, k + s.re.to_double());
  }
  // rhs = L(s+k, G0) delta_d(G0, s) / L(s+1, chi_{D2})
  lfunc::LValue lg = lfunc::modular_L(G0, s + Complex(Real(k)));
  lfunc::LValue lchi = lfunc::dirichlet_L(D2, s + Complex(Real(1L)));
  Complex dd = lfunc::delta_d(G0, d, s);
  out.rhs = lg.value * dd / lchi.value;
  out.rhs_error = (lg.error + lchi.error) * abs(out.rhs).to_double();

  // Deligne-style bound on the omitted tail:
  // |c(d^2 n^2 |D2|)/c(|D2|)| <= sum_{e | dn} e^{k-1} sigma_0(dn/e) (dn/e)^{k-1/2}
  double sre = s.re.to_double();
  double tail = 0;
  for (long n = nmax + 1; n <= nmax + 600; ++n) {
    double bnd = 0;
    long dn = d * n;
    for (long ee = 1; ee <= dn; ++ee) {
      if (dn % ee) continue;
      long q = dn / ee;
      bnd += std::pow(ee, k - 1) * nt::divisors(q).size() * std::pow(q, k - 0.5);
    }
    tail += bnd / std::pow(n, k + sre);
    if (bnd / std::pow(n, k + sre) < 1e-9 * tail) break;
  }
  out.truncation_bound = 2 * tail;  // factor-2 headroom on the partial tail
  return out;
}

}  // namespace shintani
}  // namespace weillift
