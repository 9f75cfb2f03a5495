#ifndef WEILLIFT_FQM_HPP
#define WEILLIFT_FQM_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "weillift/complex.hpp"
#include "weillift/snf.hpp"

namespace weillift {
namespace fqm {

// Finite abelian group Z/d_1 x ... x Z/d_r with a Q/Z-valued quadratic form
// given on generators.  Elements are indexed 0..|A|-1 in mixed radix.
class FiniteQuadraticModule {
 public:
  // q_i = Q(g_i) mod 1, b_ij = B(g_i, g_j) mod 1 with B(x,y) = Q(x+y)-Q(x)-Q(y).
  FiniteQuadraticModule(std::vector<long> orders, std::vector<mpq_class> qdiag,
                        std::vector<std::vector<mpq_class>> bmat);

  static FiniteQuadraticModule hyperbolic(long N);
  // Z/n with Q(x) = a x^2 / den
  static FiniteQuadraticModule cyclic(long n, long a, long den);
  // Sym_2(Z/|Delta|): triples (a, b, chat), Q = (ab - chat^2)/|Delta|
  static FiniteQuadraticModule sym2(long abs_delta);
  static FiniteQuadraticModule direct_sum(const FiniteQuadraticModule& a,
                                          const FiniteQuadraticModule& b);
  // A with quadratic form negated.
  FiniteQuadraticModule rescaled(int sign) const;

  size_t rank() const { return orders_.size(); }
  uint64_t size() const { return size_; }
  const std::vector<long>& orders() const { return orders_; }

  void coords(uint64_t id, long* x) const;
  std::vector<long> coords(uint64_t id) const;
  uint64_t index(const long* x) const;
  uint64_t index(const std::vector<long>& x) const { return index(x.data()); }
  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t neg(uint64_t a) const;
  uint64_t scalar_mul(long n, uint64_t a) const;

  // exact values in [0,1)
  mpq_class Q(uint64_t id) const;
  mpq_class B(uint64_t a, uint64_t b) const;
  bool is_isotropic(uint64_t id) const { return Q(id) == 0; }

  // common denominator and integer numerators: Q(x) = Qnum(x)/den mod 1
  long den() const { return den_; }
  long Qnum(const long* x) const;         // in [0, den)
  long Bnum(const long* x, const long* y) const;

  // Trivial radical of the bilinear form, checked exactly.
  bool nondegenerate() const;

  // Milgram: sum e(Q(gamma)) = sqrt|A| e(sig/8).  Computed numerically; throws
  // if the magnitude is off by more than tol (degenerate form).
  int signature_mod8(double tol = 1e-8) const;

 private:
  std::vector<long> orders_;
  std::vector<mpq_class> qdiag_;
  std::vector<std::vector<mpq_class>> bmat_;
  uint64_t size_;
  long den_;
  std::vector<long> qnum_;
  std::vector<std::vector<long>> bnum_;
  mutable std::optional<int> sig_;
  void validate() const;
};

using FqmPtr = std::shared_ptr<const FiniteQuadraticModule>;

// Dense complex-valued function on a module.
class WeilVector {
 public:
  WeilVector() = default;
  explicit WeilVector(FqmPtr mod) : mod_(std::move(mod)), v_(mod_->size()) {}
  WeilVector(FqmPtr mod, std::vector<Complex> v) : mod_(std::move(mod)), v_(std::move(v)) {}

  const FqmPtr& module() const { return mod_; }
  Complex& operator[](uint64_t i) { return v_[i]; }
  const Complex& operator[](uint64_t i) const { return v_[i]; }
  size_t size() const { return v_.size(); }

  Real norm() const;
  WeilVector& operator+=(const WeilVector& o);
  WeilVector& operator-=(const WeilVector& o);
  WeilVector& operator*=(const Complex& c);

 private:
  FqmPtr mod_;
  std::vector<Complex> v_;
};

Complex inner(const WeilVector& a, const WeilVector& b);  // <a,b> = sum a conj(b)

// rho(T) e_g = e(Q(g)) e_g
WeilVector weil_T(const WeilVector& v);
// rho(S) e_g = e(-sig/8)/sqrt|A| * sum_d e(-(g,d)) e_d
WeilVector weil_S(const WeilVector& v);

WeilVector random_vector(FqmPtr mod, uint64_t seed);

// Subgroup H of A with Q|_H = 0, together with its orthogonal complement.
struct IsotropicSubgroup {
  FqmPtr ambient;
  std::vector<std::vector<long>> gens;    // generator coords
  std::vector<uint64_t> elements;         // enumerated H, sorted
  std::vector<uint64_t> perp;             // enumerated H^perp, sorted

  static IsotropicSubgroup build(FqmPtr A, std::vector<std::vector<long>> gens);
};

// H^perp/H as a module plus the map from quotient elements to coset
// representatives in A.
struct Subquotient {
  FqmPtr quotient;
  std::vector<std::vector<long>> rep_coords;  // A-coords of quotient generators
  uint64_t rep_in_ambient(uint64_t qid) const;
  FqmPtr ambient;
};
Subquotient subquotient(const IsotropicSubgroup& H);

WeilVector induce(const IsotropicSubgroup& H, const Subquotient& q, const WeilVector& w);
WeilVector restrict_to(const IsotropicSubgroup& H, const Subquotient& q, const WeilVector& v);

}  // namespace fqm
}  // namespace weillift

#endif
