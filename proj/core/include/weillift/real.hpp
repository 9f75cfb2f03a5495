#ifndef WEILLIFT_REAL_HPP
#define WEILLIFT_REAL_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace weillift {

// Working precision in bits for newly created Real values.  Thread local;
// worker threads inherit it explicitly through parallel_for.
mpfr_prec_t default_prec();
void set_default_prec(mpfr_prec_t bits);

struct ScopedPrecision {
  explicit ScopedPrecision(mpfr_prec_t bits) : saved_(default_prec()) {
    set_default_prec(bits);
  }
  ~ScopedPrecision() { set_default_prec(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Tag for precision-carrying constructors (mpfr_prec_t is a plain long).
struct Prec {
  mpfr_prec_t bits;
  explicit Prec(mpfr_prec_t b) : bits(b) {}
};

// Value-semantic wrapper around mpfr_t.  Every value carries its precision;
// binary operations compute at the larger of the two operand precisions.
class Real {
 public:
  Real() : Real(Prec(default_prec())) {}
  explicit Real(Prec p) { mpfr_init2(v_, p.bits); mpfr_set_zero(v_, 1); }
  Real(long n) : Real(Prec(default_prec())) { mpfr_set_si(v_, n, MPFR_RNDN); }
  Real(int n) : Real(static_cast<long>(n)) {}
  Real(unsigned long n) : Real(Prec(default_prec())) { mpfr_set_ui(v_, n, MPFR_RNDN); }
  Real(double d) : Real(Prec(default_prec())) { mpfr_set_d(v_, d, MPFR_RNDN); }
  Real(const mpz_class& z) : Real(Prec(default_prec())) {
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  Real(const mpq_class& q) : Real(Prec(default_prec())) {
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  explicit Real(const std::string& s) : Real(Prec(default_prec())) {
    mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN);
  }

  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  // Decimal string, round-trip safe for the carried precision if digits==0.
  std::string str(size_t digits = 0) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(long n) { mpfr_mul_si(v_, v_, n, MPFR_RNDN); return *this; }
  Real& operator/=(long n) { mpfr_div_si(v_, v_, n, MPFR_RNDN); return *this; }

  Real operator-() const { Real r{Prec(prec())}; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  static Real pi(mpfr_prec_t prec = 0);
  static Real nan();

  // In-place fused accumulate: this += a*b.  Avoids a temporary.
  void addmul(const Real& a, const Real& b) { mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN); }
  void submul(const Real& a, const Real& b) { mpfr_fms(v_, a.v_, b.v_, v_, MPFR_RNDN); mpfr_neg(v_, v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

inline mpfr_prec_t join_prec(const Real& a, const Real& b) {
  return a.prec() > b.prec() ? a.prec() : b.prec();
}

#define WEILLIFT_REAL_BINOP(op, fn)                          \
  inline Real operator op(const Real& a, const Real& b) {    \
    Real r(Prec(join_prec(a, b)));                                 \
    fn(r.get(), a.get(), b.get(), MPFR_RNDN);                \
    return r;                                                \
  }
WEILLIFT_REAL_BINOP(+, mpfr_add)
WEILLIFT_REAL_BINOP(-, mpfr_sub)
WEILLIFT_REAL_BINOP(*, mpfr_mul)
WEILLIFT_REAL_BINOP(/, mpfr_div)
#undef WEILLIFT_REAL_BINOP

inline Real operator+(const Real& a, long b) { Real r(Prec(a.prec())); mpfr_add_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
inline Real operator+(long a, const Real& b) { return b + a; }
inline Real operator-(const Real& a, long b) { Real r(Prec(a.prec())); mpfr_sub_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
inline Real operator-(long a, const Real& b) { Real r(Prec(b.prec())); mpfr_si_sub(r.get(), a, b.get(), MPFR_RNDN); return r; }
inline Real operator*(const Real& a, long b) { Real r(Prec(a.prec())); mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
inline Real operator*(long a, const Real& b) { return b * a; }
inline Real operator/(const Real& a, long b) { Real r(Prec(a.prec())); mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN); return r; }
inline Real operator/(long a, const Real& b) { Real r(Prec(b.prec())); mpfr_si_div(r.get(), a, b.get(), MPFR_RNDN); return r; }

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }
inline bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.get(), b) < 0; }
inline bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.get(), b) > 0; }
inline bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.get(), b) <= 0; }
inline bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.get(), b) >= 0; }
inline bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.get(), b) == 0; }

#define WEILLIFT_REAL_FN(name, fn)        \
  inline Real name(const Real& a) {       \
    Real r(Prec(a.prec()));                     \
    fn(r.get(), a.get(), MPFR_RNDN);      \
    return r;                             \
  }
WEILLIFT_REAL_FN(sqrt, mpfr_sqrt)
WEILLIFT_REAL_FN(exp, mpfr_exp)
WEILLIFT_REAL_FN(log, mpfr_log)
WEILLIFT_REAL_FN(sin, mpfr_sin)
WEILLIFT_REAL_FN(cos, mpfr_cos)
WEILLIFT_REAL_FN(tan, mpfr_tan)
WEILLIFT_REAL_FN(atan, mpfr_atan)
WEILLIFT_REAL_FN(sinh, mpfr_sinh)
WEILLIFT_REAL_FN(cosh, mpfr_cosh)
WEILLIFT_REAL_FN(tanh, mpfr_tanh)
WEILLIFT_REAL_FN(abs, mpfr_abs)
WEILLIFT_REAL_FN(gamma, mpfr_gamma)
WEILLIFT_REAL_FN(lngamma, mpfr_lngamma)
WEILLIFT_REAL_FN(log2, mpfr_log2)
WEILLIFT_REAL_FN(expm1, mpfr_expm1)
WEILLIFT_REAL_FN(log1p, mpfr_log1p)
WEILLIFT_REAL_FN(asin, mpfr_asin)
WEILLIFT_REAL_FN(acos, mpfr_acos)
WEILLIFT_REAL_FN(acosh, mpfr_acosh)
WEILLIFT_REAL_FN(atanh, mpfr_atanh)
#undef WEILLIFT_REAL_FN

inline Real floor(const Real& a) {
  Real r(Prec(a.prec()));
  mpfr_floor(r.get(), a.get());
  return r;
}
inline Real ceil(const Real& a) {
  Real r(Prec(a.prec()));
  mpfr_ceil(r.get(), a.get());
  return r;
}

inline Real atan2(const Real& y, const Real& x) {
  Real r(Prec(join_prec(y, x)));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real hypot(const Real& x, const Real& y) {
  Real r(Prec(join_prec(y, x)));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, const Real& b) {
  Real r(Prec(join_prec(a, b)));
  mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, long n) {
  Real r(Prec(a.prec()));
  mpfr_pow_si(r.get(), a.get(), n, MPFR_RNDN);
  return r;
}
// 2^e as a Real, e may be negative.
inline Real pow2(long e, mpfr_prec_t prec = 0) {
  Real r(Prec(prec ? prec : default_prec()));
  mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
  return r;
}
inline Real ldexp(const Real& a, long e) {
  Real r(Prec(a.prec()));
  mpfr_mul_2si(r.get(), a.get(), e, MPFR_RNDN);
  return r;
}

// Nearest integer as mpz, ties to even.
mpz_class round_to_mpz(const Real& a);
// Fractional part in [0,1).
Real frac_part(const Real& a);

std::string to_decimal(const Real& a, size_t digits);

}  // namespace weillift

#endif
