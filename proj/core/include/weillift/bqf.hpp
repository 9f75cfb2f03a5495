#ifndef WEILLIFT_BQF_HPP
#define WEILLIFT_BQF_HPP

#include <gmpxx.h>

#include <vector>

#include "weillift/complex.hpp"

namespace weillift {
namespace bqf {

// Integral binary quadratic form a x^2 + b xy + c y^2.
struct BQF {
  long a = 0, b = 0, c = 0;
  long disc() const { return b * b - 4 * a * c; }
  long content() const;
  bool primitive() const { return content() == 1; }
  long eval(long x, long y) const { return a * x * x + b * x * y + c * y * y; }
  bool operator==(const BQF& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const BQF& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
};

struct Mat22 {
  mpz_class a, b, c, d;  // [[a,b],[c,d]]
  static Mat22 id() { return {1, 0, 0, 1}; }
  Mat22 mul(const Mat22& o) const;
  mpz_class det() const { return a * d - b * c; }
};

// f  o  M, i.e. f(a x + b y, c x + d y)
BQF apply(const BQF& f, const Mat22& m);

// Positive definite reduction; returns reduced form and M with f o M = reduced.
std::pair<BQF, Mat22> reduce(const BQF& f);

struct ClassGroup {
  long D;
  std::vector<BQF> reps;                       // reduced primitive forms
  std::vector<std::vector<size_t>> table;      // composition table
  size_t h() const { return reps.size(); }
  size_t identity() const;
  size_t compose(size_t i, size_t j) const { return table[i][j]; }
  size_t inverse(size_t i) const;
  size_t class_of(const BQF& f) const;         // f must be primitive of disc D
};

ClassGroup class_group(long D);

// Dirichlet composition of primitive forms of equal discriminant (reduced output).
BQF compose_forms(const BQF& f, const BQF& g);

// Generalized genus character chi_Delta(f) for Delta | disc(f); 0 iff
// gcd(a,b,c,Delta) > 1, otherwise (Delta / n) on represented n coprime to Delta.
int genus_char(long Delta, const BQF& f);
// Same on a residue form modulo |Delta| (used by invariant vectors).
int genus_char_residue(long Delta, long a, long b, long c);

struct HeegnerPoint {
  BQF form;   // [NA, B, C], B fixed mod 2N across the list
  long N;
  Complex tau(mpfr_prec_t prec = 0) const;  // (-b + i sqrt|D|) / (2a)
  long D() const { return form.disc(); }
};

// One point per class of Cl(D), all with the same B mod 2N.
std::vector<HeegnerPoint> heegner_points(long D, long N);

// Heegner point whose class is [form(p)] * sigma^{-1}.
HeegnerPoint galois_conjugate(const std::vector<HeegnerPoint>& points,
                              const ClassGroup& cl, const HeegnerPoint& p,
                              size_t sigma);

// Fundamental automorph [[ (t+bu)/2, cu ], [ -au, (t-bu)/2 ]] for minimal
// t, u > 0 with t^2 - D u^2 = 4.
Mat22 pell_automorph(const BQF& f);
// minimal (t, u)
std::pair<mpz_class, mpz_class> pell_tu(long D);

// ------- indefinite / square discriminant class machinery -------

// Gamma_0(N)-inequivalence test for forms of equal positive discriminant
// with N | a (a = 0 allowed when the discriminant is a square).
bool gamma0_equivalent(const BQF& f, const BQF& g, long N);

// Representatives of all Gamma_0(N)-classes of forms [A,B,C] with N | A and
// disc = D0 > 0 (perfect squares allowed; both orientations included).
std::vector<BQF> gamma0_classes(long D0, long N);

}  // namespace bqf
}  // namespace weillift

#endif
