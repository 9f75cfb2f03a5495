#ifndef WEILLIFT_QEXP_HPP
#define WEILLIFT_QEXP_HPP

#include <gmpxx.h>

#include <vector>

#include "weillift/complex.hpp"

namespace weillift {
namespace qexp {

// Truncated Fourier expansion with exact rational coefficients.  Exponents
// are n/den for integer n in [n0, nmax]; arithmetic tracks the truncation.
class QExpansion {
 public:
  QExpansion() = default;
  // zero series known through exponent nmax/den
  QExpansion(long den, long n0, long nmax, mpq_class weight = 0, long level = 1);

  long den() const { return den_; }
  long n0() const { return n0_; }
  long nmax() const { return nmax_; }
  const mpq_class& weight() const { return weight_; }
  long level() const { return level_; }
  void set_weight(const mpq_class& w) { weight_ = w; }
  void set_level(long l) { level_ = l; }

  // coefficient of q^{n/d}; zero outside the stored window (valid only if
  // n/d <= nmax/den)
  const mpq_class& coeff(long n, long d = 1) const;
  mpq_class& at(long n, long d = 1);  // creates/locates slot, n/d within window

  QExpansion& operator+=(const QExpansion& o);
  QExpansion& operator-=(const QExpansion& o);
  QExpansion operator*(const QExpansion& o) const;
  QExpansion& operator*=(const mpq_class& c);
  QExpansion operator-() const;

  QExpansion pow(unsigned e) const;
  // multiplicative inverse; leading coefficient must be nonzero
  QExpansion inverse() const;
  // q d/dq: multiplies the n/den coefficient by n/den
  QExpansion derivative() const;

  QExpansion U(long m) const;  // a_n -> a_{nm}
  QExpansion V(long m) const;  // a_n -> a_{n/m}
  // rescale exponent denominator to a multiple
  QExpansion with_den(long newden) const;
  QExpansion truncated(long new_nmax) const;

  // series value at tau via direct summation (no reduction); tail not bounded
  Complex eval_direct(const Complex& tau) const;

  bool integral_exponents() const { return den_ == 1; }
  // drop denominator if all nonzero exponents are integral
  QExpansion normalized() const;

 private:
  long den_ = 1, n0_ = 0, nmax_ = -1;
  std::vector<mpq_class> c_;
  mpq_class weight_ = 0;
  long level_ = 1;
  friend QExpansion mul_impl(const QExpansion& a, const QExpansion& b);
};

QExpansion operator+(QExpansion a, const QExpansion& b);
QExpansion operator-(QExpansion a, const QExpansion& b);

// Hecke operator T_m on integer-weight level-N expansions, gcd(m, N) = 1:
// multiplicative composition of prime steps a_n -> a_{np} + p^{w-1} a_{n/p}.
QExpansion hecke_T(const QExpansion& f, long m);

// r-th Cohen operator on a pair of expansions of weights k1, k2 (the
// (2 pi i)^{-r} normalization cancels against q d/dq, so this is exact).
QExpansion cohen_operator(const QExpansion& f, const QExpansion& g, unsigned r);

// binomial coefficient with rational top
mpq_class binom_q(const mpq_class& x, unsigned m);

}  // namespace qexp
}  // namespace weillift

#endif
