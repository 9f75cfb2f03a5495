#include "weillift/real.hpp"

#include <cstdlib>

namespace weillift {

namespace {
thread_local mpfr_prec_t g_prec = 256;
}

mpfr_prec_t default_prec() { return g_prec; }
void set_default_prec(mpfr_prec_t bits) { g_prec = bits < 16 ? 16 : bits; }

Real Real::pi(mpfr_prec_t prec) {
  Real r(prec ? prec : default_prec());
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real Real::nan() {
  Real r;
  mpfr_set_nan(r.get());
  return r;
}

std::string Real::str(size_t digits) const { return to_decimal(*this, digits); }

mpz_class round_to_mpz(const Real& a) {
  Real t(a.prec());
  mpfr_rint(t.get(), a.get(), MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t.get(), MPFR_RNDN);
  return z;
}

Real frac_part(const Real& a) {
  Real f = a - floor(a);
  if (f >= 1L) f -= Real(1L);  // guard against rounding at the boundary
  if (f < 0L) f += Real(1L);
  return f;
}

std::string to_decimal(const Real& a, size_t digits) {
  if (mpfr_nan_p(a.get())) return "nan";
  if (mpfr_inf_p(a.get())) return mpfr_sgn(a.get()) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(a.get())) return "0";
  if (digits == 0)
    digits = static_cast<size_t>(mpfr_get_prec(a.get()) * 0.30103) + 2;
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, a.get(), MPFR_RNDN);
  std::string mant(s);
  mpfr_free_str(s);
  bool neg = !mant.empty() && mant[0] == '-';
  std::string dig = neg ? mant.substr(1) : mant;
  // strip trailing zeros but keep at least one digit
  size_t last = dig.find_last_not_of('0');
  dig = dig.substr(0, last == std::string::npos ? 1 : last + 1);
  std::string out = neg ? "-" : "";
  if (e <= 0) {
    out += "0.";
    out.append(static_cast<size_t>(-e), '0');
    out += dig;
  } else if (static_cast<size_t>(e) >= dig.size()) {
    out += dig;
    out.append(static_cast<size_t>(e) - dig.size(), '0');
  } else {
    out += dig.substr(0, static_cast<size_t>(e)) + "." + dig.substr(static_cast<size_t>(e));
  }
  return out;
}

}  // namespace weillift
