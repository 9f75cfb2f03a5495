#ifndef WEILLIFT_COMPLEX_HPP
#define WEILLIFT_COMPLEX_HPP

#include "weillift/real.hpp"

namespace weillift {

// Rectangular complex value over Real.  MPC is not assumed; the handful of
// transcendental functions needed here are built from the real layer.
class Complex {
 public:
  Real re, im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(Prec(re.prec())) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long r) : re(r) {}
  Complex(double r) : re(r) {}
  Complex(double r, double i) : re(r), im(i) {}

  static Complex i(mpfr_prec_t prec = 0) {
    Complex z{Real(Prec(prec ? prec : default_prec()))};
    mpfr_set_si(z.im.get(), 1, MPFR_RNDN);
    return z;
  }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real a = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(a);
    return *this;
  }
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return {-re, -im}; }
};

inline Complex operator+(Complex a, const Complex& b) { a += b; return a; }
inline Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
inline Complex operator*(Complex a, const Complex& b) { a *= b; return a; }
inline Complex operator*(const Real& s, Complex a) { a.re *= s; a.im *= s; return a; }
inline Complex operator*(Complex a, const Real& s) { a.re *= s; a.im *= s; return a; }
inline Complex operator*(long s, Complex a) { a.re *= s; a.im *= s; return a; }
inline Complex operator/(Complex a, const Real& s) { a.re /= s; a.im /= s; return a; }
inline Complex operator/(Complex a, long s) { a.re /= s; a.im /= s; return a; }

inline Complex conj(Complex z) { z.im = -z.im; return z; }
inline Real norm2(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return hypot(z.re, z.im); }
inline Real arg(const Complex& z) { return atan2(z.im, z.re); }

inline Complex& Complex::operator/=(const Complex& o) {
  Real n = norm2(o);
  Real a = (re * o.re + im * o.im) / n;
  im = (im * o.re - re * o.im) / n;
  re = std::move(a);
  return *this;
}
inline Complex operator/(Complex a, const Complex& b) { a /= b; return a; }
inline Complex operator/(long a, const Complex& b) { return Complex(Real(a)) / b; }
inline Complex operator/(const Real& a, const Complex& b) { return Complex(a) / b; }

inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

inline Complex exp(const Complex& z) {
  Real m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}
// Principal branch.
inline Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }
inline Complex sqrt(const Complex& z) {
  if (z.im.is_zero() && z.re >= 0L) return {sqrt(z.re), Real(Prec(z.re.prec()))};
  Real m = abs(z);
  Real u = sqrt((m + z.re) / 2L);
  Real v = sqrt((m - z.re) / 2L);
  if (z.im.sign() < 0) v = -v;
  return {u, v};
}
inline Complex pow(const Complex& z, long n) {
  mpfr_prec_t p = join_prec(z.re, z.im);
  Complex r{Real(Prec(p))};
  mpfr_set_si(r.re.get(), 1, MPFR_RNDN);
  Complex base = z;
  unsigned long e = n < 0 ? -static_cast<unsigned long>(n) : n;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  if (n < 0) return 1L / r;
  return r;
}
// Principal power z^w = exp(w log z).
inline Complex pow(const Complex& z, const Complex& w) { return exp(w * log(z)); }
inline Complex pow(const Real& x, const Complex& w) {
  // positive real base
  return exp(w * log(Complex(x)));
}

inline Complex sin(const Complex& z) {
  return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}
inline Complex cos(const Complex& z) {
  return {cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im)};
}

// e(x) = exp(2 pi i x)
inline Complex e2pi(const Real& x) {
  Real t = Real::pi(x.prec() > default_prec() ? x.prec() : default_prec());
  t *= 2L;
  t *= x;
  return {cos(t), sin(t)};
}
inline Complex e2pi(const mpq_class& x0, mpfr_prec_t prec = 0) {
  mpq_class x = x0;
  x.canonicalize();
  mpq_class r = x - mpq_class(mpz_class(x.get_num() / x.get_den()));
  Real xr(Prec(prec ? prec : default_prec()));
  mpfr_set_q(xr.get(), r.get_mpq_t(), MPFR_RNDN);
  return e2pi(xr);
}
inline Complex e2pi(const Complex& z) {
  // exp(2 pi i (x+iy)) = e^{-2 pi y} e(x)
  Real two_pi = Real::pi(join_prec(z.re, z.im)) * 2L;
  Real m = exp(-two_pi * z.im);
  Real t = two_pi * z.re;
  return {m * cos(t), m * sin(t)};
}

}  // namespace weillift

#endif
