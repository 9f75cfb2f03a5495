#ifndef WEILLIFT_ETA_HPP
#define WEILLIFT_ETA_HPP

#include <map>

#include "weillift/complex.hpp"
#include "weillift/qexp.hpp"

namespace weillift {
namespace qexp {

// Dedekind sum s(h, k) by reciprocity, exact.
mpq_class dedekind_sum(long h, long k);
mpq_class dedekind_sum(const mpz_class& h, const mpz_class& k);

// eta(tau) at full working precision: SL2(Z) reduction with the exact
// multiplier system, then the q-product.
Complex eta(const Complex& tau);

// q^{1/24} prod (1 - q^n) as an exact expansion (den 24) through q^{nmax24/24}
QExpansion eta_qexp(long nmax24);

// Finite product prod_d eta(d tau)^{r_d}.
struct EtaQuotient {
  std::map<long, int> exponents;  // d -> r_d
  mpq_class weight() const;
  long level_hint = 0;            // optional ambient level
  QExpansion expansion(long nmax) const;  // den 24, through q^{nmax}
  Complex eval(const Complex& tau) const;
};

}  // namespace qexp
}  // namespace weillift

#endif
