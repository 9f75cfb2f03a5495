#ifndef WEILLIFT_FORMS_HPP
#define WEILLIFT_FORMS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weillift/eta.hpp"
#include "weillift/qexp.hpp"

namespace weillift {
namespace qexp {

QExpansion eisenstein(unsigned k, long order);   // E_k, k even >= 4
QExpansion delta_qexp(long order);               // eta^24
QExpansion j_invariant(long order);              // E_4^3 / Delta, from q^{-1}

// hauptmodul pi_N = (eta(z)/eta(Nz))^{24/(N-1)} for N in {3,5,7,13}
QExpansion hauptmodul_qexp(long N, long order);
Complex hauptmodul_eval(long N, const Complex& tau);

// Cuspidal Hecke newform given by its eigenvalue expansion; the built-in
// catalogue also carries an eta-quotient presentation used for evaluation.
struct Newform {
  long level = 1;
  long weight = 12;  // 2k
  std::vector<mpz_class> an;  // a(1), a(2), ...
  std::optional<int> fricke;
  std::optional<EtaQuotient> eta;
  std::string name;

  long k() const { return weight / 2; }
  mpz_class a(long n) const;
  QExpansion expansion(long order) const;
  // verify a(1)=1, multiplicativity and the p-power recurrences up to bound
  void check_eigenvalues(long bound) const;
};

Newform builtin_delta(long nterms);
// the unique newform of level 3 and weight 6, eta(z)^6 eta(3z)^6
Newform builtin_eta6_3(long nterms);

// ---------- evaluation with Gamma_0(N) reduction ----------

struct EvalOptions {
  double min_height = 0.4;  // target Im after reduction
};

// value f(tau) for an integer-weight q-series form of level N; uses the
// Fricke involution for points near the zero cusp when the sign is known
Complex evaluate_newform(const Newform& f, const Complex& tau,
                         const EvalOptions& opt = {});

// generic level-N reduction: gamma in Gamma_0(N) maximizing Im; returns
// achieved point and the matrix
struct Gamma0Reduced {
  long a, b, c, d;
  Complex tau;
};
Gamma0Reduced gamma0_reduce(const Complex& tau, long N);

// evaluate an exact expansion (weight from the expansion) with reduction;
// fricke: eigenvalue for W_N when known
Complex evaluate_qexp(const QExpansion& f, const Complex& tau, long N,
                      std::optional<int> fricke, const EvalOptions& opt = {});

// numeric Fricke eigenvalue from f(-1/(N tau)) = eps N^{w/2} tau^w f(tau)
int fricke_eigenvalue(const std::function<Complex(const Complex&)>& f, long N,
                      const mpq_class& weight, double* residual_out = nullptr);
int fricke_eigenvalue(const Newform& f, double* residual_out = nullptr);

// ---------- trace operator, numeric re-expansion ----------

struct TraceResult {
  std::vector<Complex> coeffs;  // a_1 .. a_nmax of the traced form
  double error;                 // sampling/aliasing estimate
};

// Tr^N_{N'} of an evaluable weight-w form of squarefree level N down to
// N' | N, coefficients recovered by equispaced sampling on Im z = y0.
TraceResult trace_down(const std::function<Complex(const Complex&)>& f, long w,
                       long N, long Nprime, long nmax, double y0 = 0.9);

}  // namespace qexp
}  // namespace weillift

#endif
