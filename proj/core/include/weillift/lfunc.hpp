#ifndef WEILLIFT_LFUNC_HPP
#define WEILLIFT_LFUNC_HPP

#include <functional>
#include <map>
#include <string>

#include "weillift/forms.hpp"

namespace weillift {
namespace lfunc {

struct LValue {
  Complex value;
  double error;       // relative, from truncation/acceleration
  std::string method;
};

// Quadratic character (D/.) of conductor |D|, D fundamental.  Smoothed
// character sum with incomplete-Gamma acceleration.
LValue dirichlet_L(long D, const Complex& s);
// Lambda(s, chi) = A^{s/2} Gamma_R(s + delta) L(s, chi), A = |D|;
// satisfies Lambda(s) = Lambda(1-s).
LValue completed_Lambda(long D, const Complex& s);

// Modular L by approximate functional equation.  The completed
// Lambda(f, s) = N^{s/2} (2 pi)^{-s} Gamma(s) L(f, s) satisfies
// Lambda(s) = sign Lambda(w - s) with sign = (-1)^{w/2} eps(f).
LValue modular_L(const qexp::Newform& f, const Complex& s, double cutoff = 1.0);
LValue completed_modular_L(const qexp::Newform& f, const Complex& s, double cutoff = 1.0);
int functional_equation_sign(const qexp::Newform& f);

// Petersson norm squared of an evaluable form over Gamma_0(N)\H, no index
// normalization; weight may be half-integral (the evaluator owns reduction).
Real petersson_norm_sq(const std::function<Complex(const Complex&)>& f,
                       const mpq_class& weight, long level, unsigned xnodes = 24,
                       double ymax = 16.0);
// hyperbolic area of the same quadrature domain (sanity: (pi/3) index)
Real gamma0_area(long level, unsigned xnodes = 24, double ymax = 1e7);

// constants of the explicit Rankin-Selberg identity
Complex C_k(long k, const Complex& s);
Complex gamma_p0(const qexp::Newform& G0, long p, const Complex& s);
Complex gamma_p1(const qexp::Newform& G0, long p, const Complex& s);
Complex delta_d(const qexp::Newform& G0, long d, const Complex& s);

struct RankinResult {
  Complex value;
  double error;
  bool identically_zero;  // (1 + eps) = 0 short circuit
  std::map<std::string, Complex> factors;
};

// Explicit right-hand side of the Rankin-Selberg identity for
// G(z) = G0(N3 z), newform G0 of level N0, at level N:
//   (1+eps) 2^{k+1} (-1)^{k-1+floor(k/2)} t_{D_odd}(|D_other|)
//   |D_other|^{(1-k)/2} C_k(s) zeta_N(s+1)/zeta_N(1) L(G0, s+k)
//   / (Lambda(s+1,chi_1) Lambda(s+1,chi_2)) * prod gamma_{p,0} prod gamma_{p,1}
// where t is the twisted trace computed by the shintani module.
RankinResult rankin_selberg_L(const qexp::Newform& G0, long N3, long N, long D1,
                              long D2, const Complex& s,
                              std::optional<int> fricke_override = std::nullopt,
                              double trace_tol = 1e-12);

}  // namespace lfunc
}  // namespace weillift

#endif
