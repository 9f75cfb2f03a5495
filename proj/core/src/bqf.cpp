#include "weillift/bqf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"

namespace weillift {
namespace bqf {

namespace {

long isqrt_floor(long n) {
  mpz_class z(n), r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r.get_si();
}

bool is_square(long n, long* root = nullptr) {
  if (n < 0) return false;
  long s = isqrt_floor(n);
  if (s * s == n) {
    if (root) *root = s;
    return true;
  }
  return false;
}

long to_long(const mpz_class& z) {
  if (!z.fits_slong_p()) throw validation_error("bqf: coefficient overflow");
  return z.get_si();
}

}  // namespace

long BQF::content() const {
  long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
  return g == 0 ? 1 : g;
}

Mat22 Mat22::mul(const Mat22& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

BQF apply(const BQF& f, const Mat22& m) {
  mpz_class A(f.a), B(f.b), C(f.c);
  mpz_class a2 = A * m.a * m.a + B * m.a * m.c + C * m.c * m.c;
  mpz_class b2 = 2 * A * m.a * m.b + B * (m.a * m.d + m.b * m.c) + 2 * C * m.c * m.d;
  mpz_class c2 = A * m.b * m.b + B * m.b * m.d + C * m.d * m.d;
  return {to_long(a2), to_long(b2), to_long(c2)};
}

std::pair<BQF, Mat22> reduce(const BQF& f0) {
  if (f0.disc() >= 0 || f0.a <= 0)
    throw validation_error("reduce: requires a positive definite form");
  BQF f = f0;
  Mat22 m = Mat22::id();
  for (int guard = 0; guard < 100000; ++guard) {
    if (f.c < f.a) {
      // swap via S = [[0,-1],[1,0]]
      f = {f.c, -f.b, f.a};
      m = m.mul({0, -1, 1, 0});
      continue;
    }
    if (f.b > f.a || f.b <= -f.a) {
      // translate b into (-a, a]
      long t = -static_cast<long>(std::floor((static_cast<double>(f.b) / (2.0 * f.a)) + 0.5));
      // exact fix-up
      while (f.b + 2 * f.a * t > f.a) --t;
      while (f.b + 2 * f.a * t <= -f.a) ++t;
      f = apply(f, {1, t, 0, 1});
      m = m.mul({1, t, 0, 1});
      continue;
    }
    // boundary conventions
    if (f.a == f.c && f.b < 0) {
      f = {f.c, -f.b, f.a};
      m = m.mul({0, -1, 1, 0});
      continue;
    }
    if (f.b == -f.a) {
      f = apply(f, {1, 1, 0, 1});
      m = m.mul({1, 1, 0, 1});
      continue;
    }
    return {f, m};
  }
  throw error("reduce: did not terminate");
}

namespace {

std::vector<BQF> reduced_forms(long D, bool primitive_only) {
  if (D >= 0 || (((D % 4) + 4) % 4 != 0 && ((D % 4) + 4) % 4 != 1))
    throw validation_error("reduced_forms: D must be negative, 0 or 1 mod 4");
  std::vector<BQF> out;
  long amax = isqrt_floor(-D / 3);
  for (long a = 1; a <= amax; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b - D;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      BQF f{a, b, c};
      if (primitive_only && !f.primitive()) continue;
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BQF compose_forms(const BQF& f, const BQF& g) {
  long D = f.disc();
  if (g.disc() != D) throw validation_error("compose: discriminants differ");
  if (D >= 0 || f.a <= 0 || g.a <= 0)
    throw validation_error("compose: positive definite forms required");
  if (!f.primitive() || !g.primitive())
    throw validation_error("compose: primitive forms required");
  // replace g by an equivalent form with leading coefficient coprime to f.a
  BQF g2 = g;
  if (std::gcd(f.a, g.a) != 1) {
    bool found = false;
    long L = 2 * std::abs(f.a) + 2;
    for (long x = 0; x < L && !found; ++x)
      for (long y = 0; y < L && !found; ++y) {
        if (std::gcd(x, y) != 1) continue;
        long v = g.eval(x, y);
        if (v != 0 && std::gcd(v, f.a) == 1) {
          // extend primitive (x,y) to SL2
          long u, w;
          {
            mpz_class uu, ww, gg;
            mpz_class xx(x), yy(y);
            mpz_gcdext(gg.get_mpz_t(), ww.get_mpz_t(), uu.get_mpz_t(), xx.get_mpz_t(), yy.get_mpz_t());
            // x*w + y*u = 1 -> matrix [[x, -u],[y, w]] has det x*w + y*u = 1
            u = -uu.get_si();
            w = ww.get_si();
          }
          g2 = apply(g, {x, u, y, w});
          found = true;
        }
      }
    if (!found) throw error("compose: no coprime represented value found");
  }
  long a1 = f.a, b1 = f.b, a2 = g2.a, b2 = g2.b;
  // B = b1 mod 2a1, B = b2 mod 2a2, gcd(a1,a2)=1
  mpz_class A1(a1), A2(a2);
  mpz_class t = (mpz_class(b2) - b1) / 2;  // same parity
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), A1.get_mpz_t(), A2.get_mpz_t()) == 0)
    throw error("compose: inverse failed");
  mpz_class k = (t * inv) % A2;
  mpz_class B = b1 + 2 * A1 * k;
  mpz_class A = A1 * A2;
  // normalize B into (-A, A]
  mpz_class Bn;
  mpz_fdiv_r(Bn.get_mpz_t(), B.get_mpz_t(), mpz_class(2 * A).get_mpz_t());
  if (Bn > A) Bn -= 2 * A;
  mpz_class C = (Bn * Bn - D) / (4 * A);
  BQF h{to_long(A), to_long(Bn), to_long(C)};
  return reduce(h).first;
}

size_t ClassGroup::identity() const {
  long b0 = ((D % 2) + 2) % 2;
  BQF one{1, b0, (b0 * b0 - D) / 4};
  for (size_t i = 0; i < reps.size(); ++i)
    if (reps[i] == one) return i;
  throw error("ClassGroup: identity missing");
}

size_t ClassGroup::inverse(size_t i) const {
  BQF inv = reduce({reps[i].a, -reps[i].b, reps[i].c}).first;
  return class_of(inv);
}

size_t ClassGroup::class_of(const BQF& f) const {
  BQF r = reduce(f).first;
  for (size_t i = 0; i < reps.size(); ++i)
    if (reps[i] == r) return i;
  throw validation_error("ClassGroup: form not of this discriminant");
}

ClassGroup class_group(long D) {
  if (D >= 0 || !nt::is_fundamental(D))
    throw validation_error("class_group: D must be a negative fundamental discriminant");
  ClassGroup cl;
  cl.D = D;
  cl.reps = reduced_forms(D, true);
  size_t h = cl.reps.size();
  cl.table.assign(h, std::vector<size_t>(h));
  for (size_t i = 0; i < h; ++i)
    for (size_t j = 0; j <= i; ++j) {
      BQF p = compose_forms(cl.reps[i], cl.reps[j]);
      size_t k = cl.class_of(p);
      cl.table[i][j] = cl.table[j][i] = k;
    }
  return cl;
}

int genus_char_residue(long Delta, long a, long b, long c) {
  if (Delta == 1) return 1;
  long m = std::abs(Delta);
  long g = std::gcd(std::gcd(std::abs(a) % m, std::abs(b) % m),
                    std::gcd(std::abs(c) % m, m));
  if (g > 1) return 0;
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y) {
      long n = ((a % m) * ((x * x) % m) + (b % m) * ((x * y) % m) + (c % m) * ((y * y) % m)) % m;
      n = ((n % m) + m) % m;
      if (n != 0 && std::gcd(n, m) == 1) return nt::kronecker(Delta, n);
    }
  throw error("genus_char: no represented value coprime to Delta found");
}

int genus_char(long Delta, const BQF& f) {
  if (Delta == 0 || !nt::is_fundamental(Delta))
    throw validation_error("genus_char: Delta must be a fundamental discriminant");
  if (Delta == 1) return 1;
  long D = f.disc();
  if (D % Delta != 0)
    throw validation_error("genus_char: Delta must divide disc(f)");
  // the cofactor must itself be a discriminant for the character to be
  // well defined on the class
  long co = D / Delta;
  long cm = ((co % 4) + 4) % 4;
  if (cm != 0 && cm != 1)
    throw validation_error("genus_char: disc(f)/Delta is not 0 or 1 mod 4");
  return genus_char_residue(Delta, f.a, f.b, f.c);
}

Complex HeegnerPoint::tau(mpfr_prec_t prec) const {
  ScopedPrecision sp(prec ? prec : default_prec());
  long D = form.disc();
  Real y = sqrt(Real(-D)) / (2 * form.a);
  Real x = Real(-form.b) / (2 * form.a);
  return {x, y};
}

std::vector<HeegnerPoint> heegner_points(long D, long N) {
  if (!nt::is_fundamental(D) || D >= 0)
    throw validation_error("heegner_points: D must be a negative fundamental discriminant");
  if (!nt::heegner_condition(D, N))
    throw validation_error("heegner_points: Heegner condition fails");
  long B0 = nt::sqrt_mod_4N(D, N);
  ClassGroup cl = class_group(D);
  size_t h = cl.h();
  std::vector<HeegnerPoint> out(h);
  std::vector<bool> seen(h, false);
  size_t found = 0;
  long Amax = 64 * (std::abs(D) + N) + 64;
  for (long A = 1; A <= Amax && found < h; ++A) {
    long a = N * A;
    for (long b = ((B0 % (2 * N)) + 2 * N) % (2 * N); b < 2 * a; b += 2 * N) {
      long num = b * b - D;
      if (num % (4 * a) != 0) continue;
      BQF f{a, b, num / (4 * a)};
      if (!f.primitive()) continue;
      size_t k = cl.class_of(f);
      if (!seen[k]) {
        seen[k] = true;
        out[k] = HeegnerPoint{f, N};
        ++found;
      }
    }
  }
  if (found < h) throw error("heegner_points: failed to populate all classes");
  return out;
}

HeegnerPoint galois_conjugate(const std::vector<HeegnerPoint>& points, const ClassGroup& cl,
                              const HeegnerPoint& p, size_t sigma) {
  if (p.form.disc() != cl.D)
    throw validation_error("galois_conjugate: discriminant mismatch");
  size_t base = cl.class_of(p.form);
  size_t target = cl.compose(base, cl.inverse(sigma));
  for (const auto& q : points)
    if (cl.class_of(q.form) == target) return q;
  throw error("galois_conjugate: target class missing from point list");
}

// ---------------- indefinite reduction ----------------

namespace {

struct ZForm {
  mpz_class a, b, c;
  bool operator==(const ZForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const ZForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};

ZForm to_zform(const BQF& f) { return {f.a, f.b, f.c}; }

ZForm zapply(const ZForm& f, const Mat22& m) {
  return {f.a * m.a * m.a + f.b * m.a * m.c + f.c * m.c * m.c,
          2 * f.a * m.a * m.b + f.b * (m.a * m.d + m.b * m.c) + 2 * f.c * m.c * m.d,
          f.a * m.b * m.b + f.b * m.b * m.d + f.c * m.d * m.d};
}

bool zreduced(const ZForm& f, long s /* floor sqrt D */) {
  // 1 <= b <= s and s+1-b <= 2|a| <= s+b
  if (f.b < 1 || f.b > s) return false;
  mpz_class a2 = 2 * ::abs(f.a);
  return a2 >= s + 1 - f.b && a2 <= s + f.b;
}

// normalization translate of (a,b,c): b into the window depending on |a|
Mat22 znormalize(ZForm& f, long s) {
  mpz_class a2 = 2 * ::abs(f.a);
  mpz_class lo, hi;
  if (::abs(f.a) > s) {
    lo = -::abs(f.a) + 1;
    hi = ::abs(f.a);
  } else {
    lo = s + 1 - a2;
    hi = s;
  }
  // b + 2 a t in [lo, hi]
  mpz_class t;
  mpz_class width = 2 * f.a;
  // solve approximately then fix
  mpz_class diff = lo - f.b;
  mpz_fdiv_q(t.get_mpz_t(), diff.get_mpz_t(), width.get_mpz_t());
  auto inside = [&](const mpz_class& tt) {
    mpz_class nb = f.b + 2 * f.a * tt;
    return nb >= lo && nb <= hi;
  };
  for (mpz_class dt = -2; dt <= 2; ++dt)
    if (inside(t + dt)) {
      t += dt;
      break;
    }
  if (!inside(t)) throw error("znormalize: window search failed");
  Mat22 m{1, t, 0, 1};
  f = zapply(f, m);
  return m;
}

// rho step for indefinite forms: (a,b,c) -> normalize(c,-b,a)
Mat22 zrho(ZForm& f, long s) {
  Mat22 sw{0, -1, 1, 0};
  f = zapply(f, sw);
  Mat22 tr = znormalize(f, s);
  return sw.mul(tr);
}

// reduce arbitrary indefinite form (D>0 nonsquare); returns transform
Mat22 zreduce_indef(ZForm& f, long s) {
  Mat22 m = znormalize(f, s);
  for (int guard = 0; guard < 100000; ++guard) {
    if (zreduced(f, s)) return m;
    m = m.mul(zrho(f, s));
  }
  throw error("zreduce_indef: did not terminate");
}

// full cycle of reduced forms starting at f (which must be reduced)
std::vector<ZForm> zcycle(const ZForm& f0, long s, std::vector<Mat22>* steps = nullptr) {
  std::vector<ZForm> cyc{f0};
  ZForm f = f0;
  for (int guard = 0; guard < 2000000; ++guard) {
    Mat22 st = zrho(f, s);
    if (steps) steps->push_back(st);
    if (f == f0) return cyc;
    cyc.push_back(f);
  }
  throw error("zcycle: cycle did not close");
}

}  // namespace

std::pair<mpz_class, mpz_class> pell_tu(long D) {
  if (D <= 0 || is_square(D) || ((D % 4) + 4) % 4 > 1)
    throw validation_error("pell_tu: D must be a positive nonsquare discriminant");
  long s = isqrt_floor(D);
  long b0 = (D % 2 == 0) ? 0 : 1;
  ZForm f{1, b0, (mpz_class(b0) * b0 - D) / 4};
  Mat22 m0 = zreduce_indef(f, s);
  (void)m0;
  std::vector<Mat22> steps;
  zcycle(f, s, &steps);
  Mat22 M = Mat22::id();
  for (const auto& st : steps) M = M.mul(st);
  // f o M = f with f = (a,b,c); recover (t,u) from M against f
  // M = [[(t+bu)/2, cu],[-au, (t-bu)/2]]
  mpz_class t = M.a + M.d;
  mpz_class u = -M.c / f.a;
  if (t < 0) {
    t = -t;
    u = -u;
  }
  if (u < 0) {
    // inverse automorph has (t, -u)
    u = -u;
  }
  // consistency
  if (t * t - mpz_class(D) * u * u != 4) throw error("pell_tu: cycle automorph inconsistent");
  return {t, u};
}

Mat22 pell_automorph(const BQF& f) {
  long D = f.disc();
  if (D <= 0 || is_square(D))
    throw validation_error("pell_automorph: discriminant must be positive and nonsquare");
  auto [t, u] = pell_tu(D);
  Mat22 M{(t + f.b * u) / 2, mpz_class(f.c) * u, mpz_class(-f.a) * u, (t - f.b * u) / 2};
  if (M.det() != 1) throw error("pell_automorph: determinant != 1");
  return M;
}

// ---------------- Gamma_0(N) classes ----------------

namespace {

// primitive null vectors of a square-discriminant form, as columns of SL2
// extensions; returns list of (canonical form, transform) candidates
struct SquareCanon {
  ZForm canon;
  Mat22 m;
};

std::vector<SquareCanon> square_candidates(const BQF& f, long e) {
  std::vector<SquareCanon> out;
  std::vector<std::pair<mpz_class, mpz_class>> roots;
  if (f.a != 0) {
    for (long sgn : {1, -1}) {
      mpz_class x(-f.b + sgn * e), y(2 * f.a);
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      if (g != 0) {
        x /= g;
        y /= g;
      }
      roots.emplace_back(x, y);
    }
  } else {
    roots.emplace_back(1, 0);
    // second root of b xy + c y^2: y(bx + cy) = 0 -> (x:y) = (-c : b)
    mpz_class x(-f.c), y(f.b);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    if (g != 0) {
      x /= g;
      y /= g;
    }
    roots.emplace_back(x, y);
  }
  for (auto& [x, y] : roots) {
    // extend (x,y) to [[x, -v],[y, u]] with x u + y v = 1
    mpz_class g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    if (g != 1) throw error("square_candidates: non-primitive root vector");
    Mat22 m{x, -v, y, u};
    ZForm g2 = zapply(to_zform(f), m);
    if (g2.a != 0) throw error("square_candidates: root did not annihilate");
    // translate c into [0, |b|)
    mpz_class bb = g2.b;
    mpz_class k;
    mpz_class babs = ::abs(bb);
    mpz_fdiv_q(k.get_mpz_t(), g2.c.get_mpz_t(), babs.get_mpz_t());
    if (bb < 0) k = -k;
    Mat22 tr{1, -k, 0, 1};
    ZForm g3 = zapply(g2, tr);
    if (g3.c < 0 || g3.c >= babs) {
      // fix up
      for (mpz_class dt = -2; dt <= 2; ++dt) {
        Mat22 tr2{1, -k + dt, 0, 1};
        ZForm g4 = zapply(g2, tr2);
        if (g4.c >= 0 && g4.c < babs) {
          g3 = g4;
          tr = tr2;
          break;
        }
      }
    }
    if (g3.c < 0 || g3.c >= babs) throw error("square_candidates: translation failed");
    out.push_back({g3, m.mul(tr)});
  }
  return out;
}

bool in_gamma0(const Mat22& m, long N) {
  return m.c % N == 0;
}

Mat22 inverse(const Mat22& m) {
  if (m.det() != 1) throw error("inverse: det != 1");
  return {m.d, -m.b, -m.c, m.a};
}

struct MatModN {
  long a, b, c, d, N;
  MatModN mul(const MatModN& o) const {
    return {(a * o.a + b * o.c) % N, (a * o.b + b * o.d) % N,
            (c * o.a + d * o.c) % N, (c * o.b + d * o.d) % N, N};
  }
  bool is_id() const {
    return ((a - 1) % N == 0) && (b % N == 0) && (c % N == 0) && ((d - 1) % N == 0);
  }
  bool is_neg_id() const {
    return ((a + 1) % N == 0) && (b % N == 0) && (c % N == 0) && ((d + 1) % N == 0);
  }
};

MatModN reduce_mod(const Mat22& m, long N) {
  auto r = [N](const mpz_class& z) {
    mpz_class q = z % N;
    return ((q.get_si() % N) + N) % N;
  };
  return {r(m.a), r(m.b), r(m.c), r(m.d), N};
}

}  // namespace

bool gamma0_equivalent(const BQF& f, const BQF& g, long N) {
  long D = f.disc();
  if (g.disc() != D || D <= 0)
    throw validation_error("gamma0_equivalent: need equal positive discriminants");
  if (f.content() != g.content()) return false;
  if (N == 1) {
    // SL2 test only
    long e;
    if (is_square(D, &e)) {
      auto cf = square_candidates(f, e);
      auto cg = square_candidates(g, e);
      for (const auto& x : cf)
        for (const auto& y : cg)
          if (x.canon == y.canon) return true;
      return false;
    }
    long s = isqrt_floor(D);
    ZForm zf = to_zform(f), zg = to_zform(g);
    zreduce_indef(zf, s);
    zreduce_indef(zg, s);
    auto cyc = zcycle(zf, s);
    return std::find(cyc.begin(), cyc.end(), zg) != cyc.end();
  }
  long e;
  if (is_square(D, &e)) {
    auto cf = square_candidates(f, e);
    auto cg = square_candidates(g, e);
    for (const auto& x : cf)
      for (const auto& y : cg) {
        if (!(x.canon == y.canon)) continue;
        Mat22 gamma = x.m.mul(inverse(y.m));  // f o gamma = g
        if (in_gamma0(gamma, N)) return true;
      }
    return false;
  }
  long s = isqrt_floor(D);
  ZForm zf = to_zform(f), zg = to_zform(g);
  Mat22 mf = zreduce_indef(zf, s);
  Mat22 mg = zreduce_indef(zg, s);
  // find zg in the cycle of zf, tracking the transform
  ZForm cur = zf;
  Mat22 walk = Mat22::id();
  Mat22 to_g;  // f o (mf * walk) = cur
  bool found = false;
  for (int guard = 0; guard < 2000000; ++guard) {
    if (cur == zg) {
      to_g = mf.mul(walk).mul(inverse(mg));  // f o to_g = g
      found = true;
      break;
    }
    Mat22 st = zrho(cur, s);
    walk = walk.mul(st);
    if (cur == zf) break;
  }
  if (!found) return false;
  // check to_g * Aut(g)^j in Gamma_0(N); Aut(g) = {+-M^j} with M the
  // fundamental automorph, so scan j over one period of M mod N
  Mat22 M = pell_automorph(g);
  MatModN Mm = reduce_mod(M, N);
  MatModN pw = Mm;
  long period = 1;
  long cap = 8 * N * N * N + 8;
  for (; period < cap; ++period) {
    if (pw.is_id() || pw.is_neg_id()) break;
    pw = pw.mul(Mm);
  }
  MatModN acc = reduce_mod(to_g, N);
  for (long j = 0; j <= period; ++j) {
    if (acc.c % N == 0) return true;
    acc = acc.mul(Mm);
  }
  return false;
}

std::vector<BQF> gamma0_classes(long D0, long N) {
  if (D0 <= 0) throw validation_error("gamma0_classes: positive discriminant required");
  long m4 = ((D0 % 4) + 4) % 4;
  if (m4 != 0 && m4 != 1) return {};
  auto enumerate = [&](long K) {
    std::vector<BQF> classes;
    auto try_add = [&](const BQF& f) {
      for (const auto& g : classes)
        if (gamma0_equivalent(g, f, N)) return;
      classes.push_back(f);
    };
    long e;
    if (is_square(D0, &e)) {
      for (long sgn : {1L, -1L})
        for (long C = 0; C < e; ++C) try_add(BQF{0, sgn * e, C});
    }
    for (long k = 1; k <= K; ++k) {
      for (long sa : {1L, -1L}) {
        long a = sa * N * k;
        long aa = std::abs(a);
        for (long r = 0; r < 2 * aa; ++r) {
          long num = r * r - D0;
          long mod = 4 * a;
          if (((num % mod) + mod) % mod != 0) continue;
          long b = r <= aa ? r : r - 2 * aa;
          long c = (b * b - D0) / (4 * a);
          try_add(BQF{a, b, c});
        }
      }
    }
    std::sort(classes.begin(), classes.end());
    return classes;
  };
  long K = 2 * (isqrt_floor(D0) + 1);
  auto cl = enumerate(K);
  for (int round = 0; round < 4; ++round) {
    auto cl2 = enumerate(2 * K);
    if (cl2.size() == cl.size()) return cl;
    cl = std::move(cl2);
    K *= 2;
  }
  throw error("gamma0_classes: class list did not stabilize");
}

}  // namespace bqf
}  // namespace weillift
