#ifndef WEILLIFT_INVARIANT_HPP
#define WEILLIFT_INVARIANT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "weillift/fqm.hpp"

namespace weillift {
namespace fqm {

// Fundamental invariant vector on Sym_2(Z/|Delta|) for odd fundamental Delta:
// u_K(a, b, chat) = chi_Delta([a, 2 chat, b]) on isotropic triples, 0 else.
WeilVector fundamental_invariant_uK(long Delta);
// the module it lives on (sym2(|Delta|)) for reuse
FqmPtr uK_module(long Delta);

// chi-isotypic projection of C[Sym_2(F_p)] under GL_2(F_p) acting by
// mu -> h mu h^t / det h weighted by the Legendre character of det.
struct IsotypicResult {
  unsigned dimension;
  WeilVector basis;   // nonzero generator when dimension >= 1
  bool proportional_to_uK;
  double uK_residual;
};
IsotypicResult isotypic_dimension(long p);

// Exhaustive three-way equivalence check (isotropic <=> orbit of ell <=>
// stabilizer inside ker chi) for all nontrivial mu in Sym_2(F_p).
struct Key2Report {
  long p;
  uint64_t orbit_size;        // orbit of ell = diag(1,0)
  uint64_t isotropic_nonzero; // nonzero isotropic elements
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};
Key2Report key2_bruteforce(long p);

// The lattice-level invariant vector: quotient module, the isotropic
// subgroup H, and the induced vector phi supported on iota(u_K) + H.
struct PhiN {
  long D1, D2, N;
  FqmPtr module;                      // A = dual/M as an abstract FQM
  std::vector<std::vector<long>> tuple_of_gen;  // 6-tuple (m,n,a,b,c,d) per generator
  uint64_t module_order_expected;     // N^4 |D1|^3 D2^2
  std::vector<uint64_t> H;            // enumerated isotropic subgroup
  uint64_t H_expected;                // N^2 |D2|
  std::vector<std::pair<uint64_t, int>> support;  // (element, u_K value)
  uint64_t perp_order;                // |H^perp|

  // invariance diagnostics
  bool T_fixes_exactly = false;       // Q = 0 on the support, checked exactly
  double S_residual = -1;             // ||S phi - phi|| / ||phi||
  int signature = -1;
  double milgram_mag_error = -1;
};

PhiN build_phiN(long D1, long D2, long N);

// Residual of rho(S) on a +-1-valued sparse vector, via exact phases and the
// unitary-norm identity (double accumulation; exact group arithmetic).
double sparse_S_residual(const PhiN& phi);

}  // namespace fqm
}  // namespace weillift

#endif
