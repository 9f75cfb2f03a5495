#include "doctest.h"
#include "weillift/invariant.hpp"

#include <cmath>
#include <random>

#include "weillift/errors.hpp"

using namespace weillift;
using namespace weillift::fqm;

namespace {

double rel_residual(const WeilVector& a, const WeilVector& b) {
  WeilVector d = a;
  d -= b;
  return (d.norm() / b.norm()).to_double();
}

}  // namespace

TEST_CASE("u_K values") {
  ScopedPrecision sp(128);
  for (long Delta : {-3L, -7L, -11L, 5L}) {
    auto A = uK_module(Delta);
    WeilVector u = fundamental_invariant_uK(Delta);
    long m = std::labs(Delta);
    // u_K(ell) = 1 for ell = diag(1, 0)
    long ell[3] = {1, 0, 0};
    CHECK(u[A->index(ell)].re.to_double() == 1.0);
    // u_K(0) = 0
    CHECK(u[0].is_zero());
    // supported only on isotropic elements
    for (uint64_t id = 0; id < A->size(); ++id)
      if (!u[id].is_zero()) CHECK(A->Q(id) == 0);
    (void)m;
  }
  // Delta = -3: u_K(diag(2,0)) = kronecker(-3, 2) = -1
  auto A3 = uK_module(-3);
  WeilVector u3 = fundamental_invariant_uK(-3);
  long d20[3] = {2, 0, 0};
  CHECK(u3[A3->index(d20)].re.to_double() == -1.0);
  CHECK_THROWS_AS(fundamental_invariant_uK(-4), validation_error);
  CHECK_THROWS_AS(fundamental_invariant_uK(-9), validation_error);
}

TEST_CASE("u_K invariance under S and T") {
  ScopedPrecision sp(128);
  for (long Delta : {-3L, -7L, -11L, -15L}) {
    WeilVector u = fundamental_invariant_uK(Delta);
    // T fixes exactly: Q = 0 on the support, so weil_T multiplies by e(0)=1
    WeilVector tu = weil_T(u);
    WeilVector d = tu;
    d -= u;
    CHECK(d.norm().to_double() == 0.0);
    CHECK(rel_residual(weil_S(u), u) < 1e-10);
  }
}

TEST_CASE("isotypic subspace is one dimensional, generated by u_K") {
  for (long p : {3L, 5L, 7L}) {
    auto res = isotypic_dimension(p);
    CHECK(res.dimension == 1);
    CHECK(res.proportional_to_uK);
    CHECK(res.uK_residual < 1e-10);
  }
  CHECK_THROWS_AS(isotypic_dimension(2), validation_error);
}

TEST_CASE("key2 three-way equivalence by exhaustion") {
  for (long p : {3L, 5L, 7L}) {
    auto rep = key2_bruteforce(p);
    CHECK(rep.ok());
    // orbit of ell = all nonzero isotropic elements, p^2 - 1 of them
    CHECK(rep.orbit_size == static_cast<uint64_t>(p * p - 1));
    CHECK(rep.isotropic_nonzero == rep.orbit_size);
  }
}

TEST_CASE("build_phiN at (-3,-4,1)") {
  ScopedPrecision sp(128);
  PhiN phi = build_phiN(-3, -4, 1);
  CHECK(phi.module->size() == 432);
  CHECK(phi.module_order_expected == 432);
  CHECK(phi.H.size() == 4);
  CHECK(phi.H_expected == 4);
  CHECK(phi.T_fixes_exactly);
  CHECK(phi.perp_order == 108);
  double resid = sparse_S_residual(phi);
  CHECK(resid < 1e-9);
  // cross-check against the dense weil_S on the same vector
  WeilVector v(phi.module);
  for (auto& [id, val] : phi.support) v[id] = Complex(Real(static_cast<long>(val)));
  CHECK(rel_residual(weil_S(v), v) < 1e-10);
  CHECK(rel_residual(weil_T(v), v) == 0.0);
}

TEST_CASE("orthogonal group action commutes with the Weil representation") {
  ScopedPrecision sp(128);
  long p = 5;
  auto M = std::make_shared<FiniteQuadraticModule>(FiniteQuadraticModule::sym2(p));
  // h acts by mu -> h mu h^t / det h on triples (a, b, chat)
  auto act = [&](long h[4], uint64_t id) {
    auto x = M->coords(id);
    long det = ((h[0] * h[3] - h[1] * h[2]) % p + p) % p;
    long dinv = 1;
    while ((det * dinv) % p != 1) ++dinv;
    long a = x[0], b = x[1], ch = x[2];
    long m00 = h[0] * a + h[1] * ch, m01 = h[0] * ch + h[1] * b;
    long m10 = h[2] * a + h[3] * ch, m11 = h[2] * ch + h[3] * b;
    long na = ((m00 * h[0] + m01 * h[1]) % p * dinv % p + p) % p;
    long nch = ((m00 * h[2] + m01 * h[3]) % p * dinv % p + p) % p;
    long nb = ((m10 * h[2] + m11 * h[3]) % p * dinv % p + p) % p;
    long c[3] = {na, nb, nch};
    return M->index(c);
  };
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    long h[4];
    do {
      for (auto& v : h) v = static_cast<long>(rng() % p);
    } while ((h[0] * h[3] - h[1] * h[2]) % p == 0);
    WeilVector v = random_vector(M, 100 + trial);
    auto push = [&](const WeilVector& w) {
      WeilVector o(M);
      for (uint64_t id = 0; id < M->size(); ++id) o[act(h, id)] += w[id];
      return o;
    };
    for (int which = 0; which < 2; ++which) {
      auto rho = which ? weil_T : weil_S;
      WeilVector lhs = push(rho(v));
      WeilVector rhs = rho(push(v));
      lhs -= rhs;
      CHECK((lhs.norm() / v.norm()).to_double() < 1e-12);
    }
  }
}

TEST_CASE("build_phiN rejects bad input") {
  CHECK_THROWS_AS(build_phiN(-4, -3, 1), validation_error);   // D1 even
  CHECK_THROWS_AS(build_phiN(-3, -3, 1), validation_error);   // equal
  CHECK_THROWS_AS(build_phiN(-7, -4, 3), validation_error);   // Heegner fails at 3
}
