#ifndef WEILLIFT_SPECIAL_HPP
#define WEILLIFT_SPECIAL_HPP

#include <vector>

#include "weillift/complex.hpp"

namespace weillift {

// Exact Bernoulli number B_n (B_1 = -1/2).
const mpq_class& bernoulli(unsigned n);

// Gamma function for complex argument, any z off the poles.
// Stirling series with argument shifting; reflection for Re(z) < 1/2.
Complex cgamma(const Complex& z);
Complex clog_gamma(const Complex& z);  // principal branch, Re(z) > 0 required

// Upper incomplete gamma Gamma(a, x) for complex a and real x > 0.
// Series for small x, continued fraction for large x.
Complex upper_gamma(const Complex& a, const Real& x);

// Gauss-Legendre nodes/weights on [-1,1], cached per (n, precision).
struct GLRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
const GLRule& gauss_legendre(unsigned n);

// x(x+1)...(x+n-1)
Complex rising(const Complex& x, unsigned n);

}  // namespace weillift

#endif
