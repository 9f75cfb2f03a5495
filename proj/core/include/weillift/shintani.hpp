#ifndef WEILLIFT_SHINTANI_HPP
#define WEILLIFT_SHINTANI_HPP

#include <functional>

#include "weillift/bqf.hpp"
#include "weillift/forms.hpp"

namespace weillift {
namespace shintani {

using Evaluator = std::function<Complex(const Complex&)>;

struct CycleIntegral {
  bqf::BQF form;
  long level;
  Complex value;
  double error;
};

// integral of G(z) Q(z,1)^{k-1} dz along the geodesic of Q: the closed cycle
// from z0 to (pell automorph) z0 for nonsquare disc, the full cusp-to-cusp
// geodesic for square disc (convergent for cusp forms).
CycleIntegral cycle_integral(const Evaluator& G, long weight, long N,
                             const bqf::BQF& Q, double tol = 1e-12);

struct TwistedTrace {
  Complex value;
  double error;
  long nclasses;   // number of Gamma_0(N) classes summed (0 on exact vanishing)
};

// (-1)^{k-1} |Delta|^{(1-k)/2} sum over Gamma_0(N0)-classes of forms with
// disc |Delta| m and N0 | a of chi_Delta(form) * cycle integral of G0.
TwistedTrace twisted_trace(const qexp::Newform& G0, long Delta, long m,
                           double tol = 1e-12);

struct ShintaniRatio {
  Complex value;
  double error;
};
// c(m1)/c(m2) of the Shintani lift, as a trace ratio
ShintaniRatio shintani_coeff_ratio(const qexp::Newform& G0, long Delta, long m1,
                                   long m2, double tol = 1e-12);

struct KohnenCheck {
  Complex lhs;       // truncated sum of c(d^2 n^2 |D2|)/c(|D2|) / n^{k+s}
  Complex rhs;       // L(s+k, G0) delta_d(G0, s) / L(s+1, chi_{D2})
  double lhs_error;  // propagated trace errors
  double rhs_error;
  double truncation_bound;  // bound on the omitted lhs tail
  double gap() const;
};
KohnenCheck kohnen_series_check(const qexp::Newform& G0, long d, long D2,
                                const Complex& s, long nmax);

}  // namespace shintani
}  // namespace weillift

#endif
