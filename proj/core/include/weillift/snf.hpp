#ifndef WEILLIFT_SNF_HPP
#define WEILLIFT_SNF_HPP

#include <gmpxx.h>

#include <vector>

namespace weillift {
namespace linalg {

using Mat = std::vector<std::vector<mpz_class>>;  // row major

Mat identity(size_t n);
Mat mul(const Mat& A, const Mat& B);

// U*A*V = diag(d), d_i | d_{i+1}, U and V unimodular.  Uinv and Vinv are the
// tracked inverses (A = Uinv * diag * Vinv).
struct SNF {
  std::vector<mpz_class> diag;  // length min(m,n)
  Mat U, Uinv, V, Vinv;
};
SNF smith_normal_form(Mat A);

// Basis of the column span of A (full column HNF reduction); result has one
// column per independent direction.
Mat column_lattice_basis(const Mat& A);

// Solve T x = b over Q; throws if T singular. integral set if x is integral.
std::vector<mpq_class> solve_rational(const Mat& T, const std::vector<mpz_class>& b);

// Generators of { x in Z^n : A x = 0 mod q } as columns of the returned
// matrix (a full-rank lattice containing q Z^n).
Mat kernel_mod(const Mat& A, const mpz_class& q);

}  // namespace linalg
}  // namespace weillift

#endif
