#include "weillift/qexp.hpp"

#include <numeric>

#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"

namespace weillift {
namespace qexp {

namespace {
const mpq_class kZero(0);
long floordiv(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
long ceildiv(long a, long b) { return -floordiv(-a, b); }
}  // namespace

QExpansion::QExpansion(long den, long n0, long nmax, mpq_class weight, long level)
    : den_(den), n0_(n0), nmax_(nmax), weight_(std::move(weight)), level_(level) {
  if (den < 1) throw validation_error("QExpansion: den must be positive");
  if (nmax >= n0) c_.assign(static_cast<size_t>(nmax - n0 + 1), mpq_class(0));
}

const mpq_class& QExpansion::coeff(long n, long d) const {
  // coefficient of q^{n/d}
  if (mpq_class(n, d) > mpq_class(nmax_, den_))
    throw validation_error("QExpansion::coeff: beyond truncation");
  if ((n * den_) % d != 0) return kZero;
  long idx = n * den_ / d;
  if (idx < n0_) return kZero;
  return c_[static_cast<size_t>(idx - n0_)];
}

mpq_class& QExpansion::at(long n, long d) {
  n *= den_ / d;
  if (n < n0_ || n > nmax_) throw validation_error("QExpansion::at: outside window");
  return c_[static_cast<size_t>(n - n0_)];
}

QExpansion QExpansion::with_den(long newden) const {
  if (newden % den_ != 0) throw validation_error("with_den: not a multiple");
  long f = newden / den_;
  QExpansion r(newden, n0_ * f, nmax_ * f, weight_, level_);
  for (long n = n0_; n <= nmax_; ++n) r.c_[static_cast<size_t>((n - n0_) * f)] = c_[static_cast<size_t>(n - n0_)];
  return r;
}

QExpansion QExpansion::truncated(long new_nmax) const {
  if (new_nmax > nmax_) throw validation_error("truncated: cannot extend");
  QExpansion r(den_, n0_, new_nmax, weight_, level_);
  for (long n = n0_; n <= new_nmax; ++n) r.c_[static_cast<size_t>(n - n0_)] = c_[static_cast<size_t>(n - n0_)];
  return r;
}

QExpansion& QExpansion::operator+=(const QExpansion& o) {
  long d = std::lcm(den_, o.den_);
  QExpansion a = with_den(d), b = o.with_den(d);
  long n0 = std::min(a.n0_, b.n0_);
  long nmax = std::min(a.nmax_, b.nmax_);
  QExpansion r(d, n0, nmax, weight_, std::lcm(level_, o.level_));
  for (long n = n0; n <= nmax; ++n) {
    mpq_class v(0);
    if (n >= a.n0_) v += a.c_[static_cast<size_t>(n - a.n0_)];
    if (n >= b.n0_) v += b.c_[static_cast<size_t>(n - b.n0_)];
    r.c_[static_cast<size_t>(n - n0)] = v;
  }
  *this = std::move(r);
  return *this;
}

QExpansion& QExpansion::operator-=(const QExpansion& o) {
  QExpansion neg = -o;
  return *this += neg;
}

QExpansion QExpansion::operator-() const {
  QExpansion r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

QExpansion& QExpansion::operator*=(const mpq_class& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

QExpansion QExpansion::operator*(const QExpansion& o) const {
  long d = std::lcm(den_, o.den_);
  QExpansion a = with_den(d), b = o.with_den(d);
  long n0 = a.n0_ + b.n0_;
  long nmax = std::min(a.nmax_ + b.n0_, b.nmax_ + a.n0_);
  QExpansion r(d, n0, nmax, weight_ + o.weight_, std::lcm(level_, o.level_));
  for (long i = a.n0_; i <= a.nmax_; ++i) {
    const mpq_class& ai = a.c_[static_cast<size_t>(i - a.n0_)];
    if (ai == 0) continue;
    long jmax = std::min(b.nmax_, nmax - i);
    for (long j = b.n0_; j <= jmax; ++j) {
      const mpq_class& bj = b.c_[static_cast<size_t>(j - b.n0_)];
      if (bj == 0) continue;
      r.c_[static_cast<size_t>(i + j - n0)] += ai * bj;
    }
  }
  return r;
}

QExpansion QExpansion::pow(unsigned e) const {
  if (e == 0) {
    QExpansion one(den_, 0, nmax_ - n0_, mpq_class(0), level_);
    one.at(0, den_) = 1;
    return one;
  }
  QExpansion acc = *this;
  for (unsigned i = 1; i < e; ++i) acc = acc * (*this);
  return acc;
}

QExpansion QExpansion::inverse() const {
  if (c_.empty() || c_[0] == 0)
    throw validation_error("inverse: leading coefficient must be nonzero");
  long len = nmax_ - n0_;
  QExpansion r(den_, -n0_, -n0_ + len, -weight_, level_);
  mpq_class lead = 1 / c_[0];
  r.c_[0] = lead;
  for (long k = 1; k <= len; ++k) {
    mpq_class s(0);
    for (long j = 1; j <= k; ++j) {
      if (c_[static_cast<size_t>(j)] == 0) continue;
      s += c_[static_cast<size_t>(j)] * r.c_[static_cast<size_t>(k - j)];
    }
    r.c_[static_cast<size_t>(k)] = -lead * s;
  }
  return r;
}

QExpansion QExpansion::derivative() const {
  QExpansion r = *this;
  for (long n = n0_; n <= nmax_; ++n) {
    mpq_class f(n, den_);
    f.canonicalize();
    r.c_[static_cast<size_t>(n - n0_)] *= f;
  }
  return r;
}

QExpansion QExpansion::U(long m) const {
  if (m < 1) throw validation_error("U: m >= 1");
  long lo = ceildiv(n0_, m), hi = floordiv(nmax_, m);
  QExpansion r(den_, lo, hi, weight_, level_);
  for (long n = lo; n <= hi; ++n) r.c_[static_cast<size_t>(n - lo)] = c_[static_cast<size_t>(n * m - n0_)];
  return r;
}

QExpansion QExpansion::V(long m) const {
  if (m < 1) throw validation_error("V: m >= 1");
  QExpansion r(den_, n0_ * m, nmax_ * m, weight_, level_ * m);
  for (auto& x : r.c_) x = 0;
  for (long n = n0_; n <= nmax_; ++n)
    r.c_[static_cast<size_t>((n - n0_) * m)] = c_[static_cast<size_t>(n - n0_)];
  return r;
}

QExpansion QExpansion::normalized() const {
  long g = den_;
  for (long n = n0_; n <= nmax_; ++n)
    if (c_[static_cast<size_t>(n - n0_)] != 0) g = std::gcd(g, n);
  if (g <= 1) return *this;
  long lo = ceildiv(n0_, g), hi = floordiv(nmax_, g);
  QExpansion r(den_ / g, lo, hi, weight_, level_);
  for (long n = lo; n <= hi; ++n) r.c_[static_cast<size_t>(n - lo)] = c_[static_cast<size_t>(n * g - n0_)];
  return r;
}

Complex QExpansion::eval_direct(const Complex& tau) const {
  Complex s{Real(0L)};
  for (long n = n0_; n <= nmax_; ++n) {
    const mpq_class& a = c_[static_cast<size_t>(n - n0_)];
    if (a == 0) continue;
    Complex term = e2pi(tau * Real(mpq_class(n, den_)));
    s += Real(a) * term;
  }
  return s;
}

QExpansion operator+(QExpansion a, const QExpansion& b) { a += b; return a; }
QExpansion operator-(QExpansion a, const QExpansion& b) { a -= b; return a; }

namespace {

// single prime step: (T_p f)_n = a_{np} + p^{w-1} a_{n/p}
QExpansion hecke_Tp(const QExpansion& f, long p) {
  if (!f.integral_exponents())
    throw validation_error("hecke_T: integer exponents required");
  if (f.level() % p == 0)
    throw validation_error("hecke_T: p must be coprime to the level");
  if (f.weight().get_den() != 1)
    throw validation_error("hecke_T: integer weight required");
  long w = f.weight().get_num().get_si();
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, w - 1);
  long lo = ceildiv(f.n0(), p), hi = floordiv(f.nmax(), p);
  QExpansion r(1, lo, hi, f.weight(), f.level());
  for (long n = lo; n <= hi; ++n) {
    mpq_class v = f.coeff(n * p);
    if (n % p == 0) v += mpq_class(pk) * f.coeff(n / p);
    r.at(n) = v;
  }
  return r;
}

}  // namespace

QExpansion hecke_T(const QExpansion& f, long m) {
  if (m < 1) throw validation_error("hecke_T: m >= 1");
  QExpansion r = f;
  for (auto& [pz, e] : nt::factorize(m).factors) {
    long p = pz.get_si();
    // T_{p^e} via the recursion T_p T_{p^{j}} = T_{p^{j+1}} + p^{w-1} T_{p^{j-1}}
    QExpansion prev = r;           // T_{p^0} applied
    QExpansion cur = hecke_Tp(r, p);  // T_{p^1}
    for (unsigned j = 2; j <= e; ++j) {
      long w = f.weight().get_num().get_si();
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, w - 1);
      QExpansion next = hecke_Tp(cur, p);
      QExpansion back = prev;
      back *= mpq_class(pk);
      next -= back;
      prev = std::move(cur);
      cur = std::move(next);
    }
    r = (e == 0) ? r : cur;
  }
  return r;
}

mpq_class binom_q(const mpq_class& x, unsigned m) {
  mpq_class num(1);
  for (unsigned j = 0; j < m; ++j) num *= x - mpq_class(j);
  mpz_class fact(1);
  for (unsigned j = 2; j <= m; ++j) fact *= j;
  mpq_class r = num / mpq_class(fact);
  r.canonicalize();
  return r;
}

QExpansion cohen_operator(const QExpansion& f, const QExpansion& g, unsigned r) {
  const mpq_class &k1 = f.weight(), &k2 = g.weight();
  // derivatives of f and g
  std::vector<QExpansion> df{f}, dg{g};
  for (unsigned j = 1; j <= r; ++j) {
    df.push_back(df.back().derivative());
    dg.push_back(dg.back().derivative());
  }
  QExpansion acc;
  bool first = true;
  for (unsigned s = 0; s <= r; ++s) {
    mpq_class c = binom_q(k1 + mpq_class(static_cast<long>(r) - 1), s) *
                  binom_q(k2 + mpq_class(static_cast<long>(r) - 1), r - s);
    if (s % 2 == 1) c = -c;
    QExpansion term = df[r - s] * dg[s];
    term *= c;
    if (first) {
      acc = std::move(term);
      first = false;
    } else {
      acc += term;
    }
  }
  acc.set_weight(k1 + k2 + mpq_class(2L * r));
  return acc;
}

}  // namespace qexp
}  // namespace weillift
