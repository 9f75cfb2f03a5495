#include "weillift/snf.hpp"

#include <algorithm>

#include "weillift/errors.hpp"

namespace weillift {
namespace linalg {

Mat identity(size_t n) {
  Mat I(n, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

Mat mul(const Mat& A, const Mat& B) {
  size_t m = A.size(), k = B.size(), n = B.empty() ? 0 : B[0].size();
  Mat C(m, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (size_t j = 0; j < n; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

namespace {

// row ops on A with tracked U (left) and Uinv
struct RowOps {
  Mat &A, &U, &Uinv;
  void swap(size_t i, size_t j) {
    std::swap(A[i], A[j]);
    std::swap(U[i], U[j]);
    for (auto& r : Uinv) std::swap(r[i], r[j]);
  }
  void add(size_t dst, size_t src, const mpz_class& c) {  // row dst += c*src
    size_t n = A[0].size(), m = U.size();
    for (size_t j = 0; j < n; ++j) A[dst][j] += c * A[src][j];
    for (size_t j = 0; j < m; ++j) U[dst][j] += c * U[src][j];
    for (size_t i = 0; i < m; ++i) Uinv[i][src] -= c * Uinv[i][dst];
  }
  void negate(size_t i) {
    for (auto& x : A[i]) x = -x;
    for (auto& x : U[i]) x = -x;
    for (auto& r : Uinv) r[i] = -r[i];
  }
};

struct ColOps {
  Mat &A, &V, &Vinv;
  void swap(size_t i, size_t j) {
    for (auto& r : A) std::swap(r[i], r[j]);
    for (auto& r : V) std::swap(r[i], r[j]);
    std::swap(Vinv[i], Vinv[j]);
  }
  void add(size_t dst, size_t src, const mpz_class& c) {  // col dst += c*src
    for (auto& r : A) r[dst] += c * r[src];
    for (auto& r : V) r[dst] += c * r[src];
    size_t n = Vinv[0].size();
    for (size_t j = 0; j < n; ++j) Vinv[src][j] -= c * Vinv[dst][j];
  }
  void negate(size_t i) {
    for (auto& r : A) r[i] = -r[i];
    for (auto& r : V) r[i] = -r[i];
    for (auto& x : Vinv[i]) x = -x;
  }
};

}  // namespace

SNF smith_normal_form(Mat A) {
  size_t m = A.size(), n = m ? A[0].size() : 0;
  SNF s;
  s.U = identity(m);
  s.Uinv = identity(m);
  s.V = identity(n);
  s.Vinv = identity(n);
  RowOps ro{A, s.U, s.Uinv};
  ColOps co{A, s.V, s.Vinv};
  size_t k = std::min(m, n);
  for (size_t t = 0; t < k; ++t) {
    // find smallest nonzero pivot in A[t..,t..]
    for (;;) {
      size_t pi = t, pj = t;
      bool found = false;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j)
          if (A[i][j] != 0 &&
              (!found || mpz_cmpabs(A[i][j].get_mpz_t(), A[pi][pj].get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
            found = true;
          }
      if (!found) goto done_pivots;
      if (pi != t) ro.swap(pi, t);
      if (pj != t) co.swap(pj, t);
      if (A[t][t] < 0) ro.negate(t);
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i)
        if (A[i][t] != 0) {
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
          ro.add(i, t, -q);
          if (A[i][t] != 0) clean = false;
        }
      for (size_t j = t + 1; j < n; ++j)
        if (A[t][j] != 0) {
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
          co.add(j, t, -q);
          if (A[t][j] != 0) clean = false;
        }
      if (!clean) continue;
      // ensure pivot divides the rest of the block
      bool divides = true;
      for (size_t i = t + 1; i < m && divides; ++i)
        for (size_t j = t + 1; j < n && divides; ++j)
          if (A[i][j] % A[t][t] != 0) {
            ro.add(t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
  }
done_pivots:
  s.diag.resize(k);
  for (size_t t = 0; t < k; ++t) s.diag[t] = A[t][t];
  return s;
}

Mat column_lattice_basis(const Mat& A) {
  size_t m = A.size(), n = m ? A[0].size() : 0;
  Mat W = A;
  Mat V = identity(n), Vinv = identity(n);
  ColOps co{W, V, Vinv};
  size_t col = 0;
  for (size_t row = 0; row < m && col < n; ++row) {
    for (;;) {
      size_t pj = col;
      bool found = false;
      for (size_t j = col; j < n; ++j)
        if (W[row][j] != 0 && (!found || mpz_cmpabs(W[row][j].get_mpz_t(), W[row][pj].get_mpz_t()) < 0)) {
          pj = j;
          found = true;
        }
      if (!found) break;
      if (pj != col) co.swap(pj, col);
      if (W[row][col] < 0) co.negate(col);
      bool clean = true;
      for (size_t j = col + 1; j < n; ++j)
        if (W[row][j] != 0) {
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), W[row][j].get_mpz_t(), W[row][col].get_mpz_t());
          co.add(j, col, -q);
          if (W[row][j] != 0) clean = false;
        }
      if (clean) {
        ++col;
        break;
      }
    }
  }
  // keep nonzero columns
  Mat B(m);
  for (size_t i = 0; i < m; ++i) B[i].reserve(col);
  for (size_t j = 0; j < col; ++j)
    for (size_t i = 0; i < m; ++i) B[i].push_back(W[i][j]);
  return B;
}

std::vector<mpq_class> solve_rational(const Mat& T, const std::vector<mpz_class>& b) {
  size_t n = T.size();
  if (n == 0 || T[0].size() != n || b.size() != n)
    throw validation_error("solve_rational: need square system");
  std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n + 1));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) M[i][j] = mpq_class(T[i][j]);
    M[i][n] = mpq_class(b[i]);
  }
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) throw validation_error("solve_rational: singular matrix");
    std::swap(M[p], M[c]);
    mpq_class inv = 1 / M[c][c];
    for (size_t j = c; j <= n; ++j) M[c][j] *= inv;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || M[i][c] == 0) continue;
      mpq_class f = M[i][c];
      for (size_t j = c; j <= n; ++j) M[i][j] -= f * M[c][j];
    }
  }
  std::vector<mpq_class> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = M[i][n];
    x[i].canonicalize();
  }
  return x;
}

Mat kernel_mod(const Mat& A, const mpz_class& q) {
  size_t m = A.size(), n = m ? A[0].size() : 0;
  SNF s = smith_normal_form(A);
  // columns beyond the rank rows carry no constraint
  std::vector<mpz_class> scale(n, 1);
  size_t k = std::min(m, n);
  for (size_t i = 0; i < k; ++i) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), s.diag[i].get_mpz_t(), q.get_mpz_t());
    scale[i] = q / g;
  }
  // columns: V * diag(scale)
  Mat K(n, std::vector<mpz_class>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) K[i][j] = s.V[i][j] * scale[j];
  return K;
}

}  // namespace linalg
}  // namespace weillift
