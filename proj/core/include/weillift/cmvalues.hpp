#ifndef WEILLIFT_CMVALUES_HPP
#define WEILLIFT_CMVALUES_HPP

#include <vector>

#include "weillift/bqf.hpp"
#include "weillift/numtheory.hpp"

namespace weillift {
namespace cm {

// Legendre function of the second kind Q_{s-1}(t), t > 1, via the defining
// integral over the half line.
Complex legendre_Q(const Complex& s_minus_one, const Real& t);

// g_s(z1, z2) = -2 Q_{s-1}(1 + |z1-z2|^2 / (2 y1 y2))
Real green_g(const Real& s, const Complex& z1, const Complex& z2);

struct GreenSum {
  Real value;
  double tail_bound;
  long terms;
};
// sum of g_s(z1, gamma z2) over Gamma_0(N) with cosh(distance) <= cutoff
GreenSum green_GN(const Real& s, long N, const Complex& z1, const Complex& z2,
                  double cutoff = 2000.0);

// higher Green function sum_m c_f(-m) m^{k-1} (T_m G^N_k)(z1, z2) with the
// Hecke operator acting on the second variable
GreenSum green_Gkf(long k, const std::vector<std::pair<long, double>>& principal_part,
                   long N, const Complex& z1, const Complex& z2, double cutoff = 2000.0);

struct CMCycle {
  long D1, D2, N;
  size_t image_size;  // admissible class pairs
  // four Heegner-pair blocks per admissible pair
  std::vector<std::pair<bqf::HeegnerPoint, bqf::HeegnerPoint>> pairs;
};

CMCycle cm_cycle(long D1, long D2, long N);

struct NormCertificate {
  long N, D1, D2;
  size_t cycle_size;
  mpfr_prec_t precision;
  double product_log10;       // log10 |product|
  double imag_residual;       // |Im product| (conjugate-closed cycle check)
  mpz_class nearest_integer;
  double distance;            // |product - nearest integer|
  nt::Factorization factors;  // of |nearest integer|
  bool is_unit;
};

// product over the CM cycle of (pi_N(z1) - pi_N(z2)), certified integral
NormCertificate cm_norm(long N, long D1, long D2, mpfr_prec_t prec = 0);

}  // namespace cm
}  // namespace weillift

#endif
