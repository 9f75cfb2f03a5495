#include "weillift/invariant.hpp"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "weillift/bqf.hpp"
#include "weillift/errors.hpp"
#include "weillift/numtheory.hpp"
#include "weillift/parallel.hpp"

namespace weillift {
namespace fqm {

namespace {

void require_odd_fundamental(long Delta) {
  if (Delta == 1 || Delta % 2 == 0 || !nt::is_fundamental(Delta))
    throw validation_error("u_K: Delta must be an odd fundamental discriminant != 1");
}

}  // namespace

FqmPtr uK_module(long Delta) {
  require_odd_fundamental(Delta);
  return std::make_shared<FiniteQuadraticModule>(
      FiniteQuadraticModule::sym2(std::labs(Delta)));
}

WeilVector fundamental_invariant_uK(long Delta) {
  require_odd_fundamental(Delta);
  long m = std::labs(Delta);
  auto A = uK_module(Delta);
  WeilVector v(A);
  long x[3];
  for (uint64_t id = 0; id < A->size(); ++id) {
    A->coords(id, x);
    long a = x[0], b = x[1], ch = x[2];
    if (((a * b - ch * ch) % m + m) % m != 0) continue;
    int val = bqf::genus_char_residue(Delta, a, 2 * ch, b);
    if (val) v[id] = Complex(Real(static_cast<long>(val)));
  }
  return v;
}

namespace {

struct GL2Elem {
  long a, b, c, d;  // mod p
  int chi;          // Legendre symbol of det
};

std::vector<GL2Elem> gl2_elements(long p) {
  std::vector<GL2Elem> out;
  for (long a = 0; a < p; ++a)
    for (long b = 0; b < p; ++b)
      for (long c = 0; c < p; ++c)
        for (long d = 0; d < p; ++d) {
          long det = ((a * d - b * c) % p + p) % p;
          if (det == 0) continue;
          out.push_back({a, b, c, d, nt::kronecker(det, p)});
        }
  return out;
}

long inv_mod(long a, long p) {
  long t = 0, nt_ = 1, r = p, nr = ((a % p) + p) % p;
  while (nr) {
    long q = r / nr;
    std::swap(t, nt_);
    nt_ -= q * t;
    std::swap(r, nr);
    nr -= q * r;
  }
  return ((t % p) + p) % p;
}

// action mu -> h mu h^t / det h on triples (a, b, chat) mod p
uint64_t act(const GL2Elem& h, long p, long a, long b, long ch, const FiniteQuadraticModule& A) {
  long det = ((h.a * h.d - h.b * h.c) % p + p) % p;
  long dinv = inv_mod(det, p);
  // M = [[a, ch],[ch, b]]; hM = [[a ha + ch hb, ch ha + b hb],[a hc + ch hd, ch hc + b hd]]
  long m00 = h.a * a + h.b * ch, m01 = h.a * ch + h.b * b;
  long m10 = h.c * a + h.d * ch, m11 = h.c * ch + h.d * b;
  long r00 = (m00 * h.a + m01 * h.b) % p;
  long r01 = (m00 * h.c + m01 * h.d) % p;
  long r11 = (m10 * h.c + m11 * h.d) % p;
  long na = ((r00 * dinv) % p + p) % p;
  long nch = ((r01 * dinv) % p + p) % p;
  long nb = ((r11 * dinv) % p + p) % p;
  long coords[3] = {na, nb, nch};
  return A.index(coords);
}

}  // namespace

IsotypicResult isotypic_dimension(long p) {
  if (p < 3 || p % 2 == 0 || !nt::is_probable_prime(mpz_class(p)))
    throw validation_error("isotypic_dimension: p must be an odd prime");
  auto A = std::make_shared<FiniteQuadraticModule>(FiniteQuadraticModule::sym2(p));
  uint64_t n = A->size();
  auto gl2 = gl2_elements(p);
  // integer projection matrix column by column
  std::vector<std::vector<long>> cols(n, std::vector<long>(n, 0));
  long x[3];
  for (uint64_t mu = 0; mu < n; ++mu) {
    A->coords(mu, x);
    for (const auto& h : gl2) cols[mu][act(h, p, x[0], x[1], x[2], *A)] += h.chi;
  }
  long lcoords[3] = {1, 0, 0};
  uint64_t ell = A->index(lcoords);
  const auto& u = cols[ell];
  uint64_t i0 = 0;
  while (i0 < n && u[i0] == 0) ++i0;
  IsotypicResult res;
  if (i0 == n) {
    res.dimension = 0;
    res.proportional_to_uK = false;
    res.uK_residual = 1;
    return res;
  }
  bool all_prop = true;
  for (uint64_t mu = 0; mu < n && all_prop; ++mu)
    for (uint64_t i = 0; i < n; ++i)
      if (static_cast<long long>(cols[mu][i]) * u[i0] != static_cast<long long>(cols[mu][i0]) * u[i]) {
        all_prop = false;
        break;
      }
  res.dimension = all_prop ? 1 : 2;
  WeilVector basis(A);
  for (uint64_t i = 0; i < n; ++i) basis[i] = Complex(Real(u[i]));
  res.basis = basis;
  // compare with u_K for Delta = (-1)^((p-1)/2) p
  long Delta = (p % 4 == 1) ? p : -p;
  WeilVector uk = fundamental_invariant_uK(Delta);
  // scale basis by u[i0] sign and the value of uk at i0
  Real scale = uk[i0].re / basis[i0].re;
  WeilVector scaled = basis;
  scaled *= Complex(scale);
  WeilVector diff = scaled;
  diff -= uk;
  res.uK_residual = (diff.norm() / uk.norm()).to_double();
  res.proportional_to_uK = res.uK_residual < 1e-10;
  return res;
}

Key2Report key2_bruteforce(long p) {
  if (p < 3 || p > 13 || p % 2 == 0)
    throw validation_error("key2_bruteforce: odd prime p <= 13");
  auto A = std::make_shared<FiniteQuadraticModule>(FiniteQuadraticModule::sym2(p));
  uint64_t n = A->size();
  auto gl2 = gl2_elements(p);
  long lcoords[3] = {1, 0, 0};
  uint64_t ell = A->index(lcoords);
  // orbit of ell
  std::set<uint64_t> orbit;
  long x[3];
  A->coords(ell, x);
  for (const auto& h : gl2) orbit.insert(act(h, p, x[0], x[1], x[2], *A));
  Key2Report rep;
  rep.p = p;
  rep.orbit_size = orbit.size();
  rep.isotropic_nonzero = 0;
  for (uint64_t mu = 1; mu < n; ++mu) {
    A->coords(mu, x);
    bool isotropic = ((x[0] * x[1] - x[2] * x[2]) % p + p) % p == 0;
    if (isotropic) ++rep.isotropic_nonzero;
    bool in_orbit = orbit.count(mu) != 0;
    bool stab_in_ker = true;
    for (const auto& h : gl2) {
      if (act(h, p, x[0], x[1], x[2], *A) == mu && h.chi == -1) {
        stab_in_ker = false;
        break;
      }
    }
    if (isotropic != in_orbit || isotropic != stab_in_ker) {
      rep.counterexamples.push_back("mu=(" + std::to_string(x[0]) + "," + std::to_string(x[1]) +
                                    "," + std::to_string(x[2]) + ") iso=" + std::to_string(isotropic) +
                                    " orbit=" + std::to_string(in_orbit) +
                                    " stab=" + std::to_string(stab_in_ker));
    }
  }
  return rep;
}

// ---------------- phi_N builder ----------------

namespace {

mpq_class mpq_frac(mpz_class num, mpz_class den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

struct TupleLattice {
  long D1, D2, N, B2;
  mpz_class nm_theta;  // (B2^2 - D2)/4
  // Q on integer tuples (m, n, a, b, c, d)
  mpq_class Q(const std::vector<mpz_class>& t) const {
    const mpz_class &m = t[0], &n = t[1], &a = t[2], &b = t[3], &c = t[4], &d = t[5];
    mpz_class nm_alpha = m * m * N * N + m * n * N * B2 + n * n * nm_theta;
    mpq_class q(0);
    q += mpq_frac(nm_alpha, mpz_class(N) * N * D2);
    q -= mpq_frac(a * b, mpz_class(N) * D1);
    q += mpq_frac(c * c, 4 * mpz_class(D1));
    q -= mpq_frac(d * d, 4 * mpz_class(D2));
    q.canonicalize();
    return q;
  }
};

mpq_class mod1q(mpq_class q) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  q -= fl;
  q.canonicalize();
  return q;
}

}  // namespace

PhiN build_phiN(long D1, long D2, long N) {
  require_odd_fundamental(D1);
  if (D1 >= 0 || D2 >= 0 || !nt::is_fundamental(D2) || D1 == D2)
    throw validation_error("build_phiN: need distinct negative fundamental D1 (odd), D2");
  if (!nt::heegner_condition(D1, N) || !nt::heegner_condition(D2, N))
    throw validation_error("build_phiN: Heegner condition fails for N");
  long D0 = std::gcd(std::labs(D1), std::labs(D2));
  if (D0 % 2 == 0) throw validation_error("build_phiN: gcd(D1,D2) must be odd");
  mpz_class Dz = mpz_class(D1) * D2;
  if (mpz_perfect_square_p(Dz.get_mpz_t()))
    throw validation_error("build_phiN: D1 D2 must not be a perfect square");
  long D = static_cast<long>(Dz.get_si());
  long DF = D / (D0 * D0);

  TupleLattice L;
  L.D1 = D1;
  L.D2 = D2;
  L.N = N;
  L.B2 = nt::sqrt_mod_4N(D2, N);
  L.nm_theta = (mpz_class(L.B2) * L.B2 - D2) / 4;

  // basis of the dual lattice in tuple coordinates
  size_t dim = 6;
  std::vector<std::vector<mpz_class>> E(dim, std::vector<mpz_class>(dim, 0));
  for (size_t i = 0; i < 4; ++i) E[i][i] = 1;
  if (DF % 2 == 0) {
    E[4][4] = 1;  // c free
    E[5][5] = 2;  // d even
  } else {
    E[4][4] = 1;
    E[5][4] = 1;  // (c,d) = (1,1)
    E[5][5] = 2;
  }
  auto col = [&](size_t j) {
    std::vector<mpz_class> v(dim);
    for (size_t i = 0; i < dim; ++i) v[i] = E[i][j];
    return v;
  };
  auto addv = [&](std::vector<mpz_class> x, const std::vector<mpz_class>& y) {
    for (size_t i = 0; i < dim; ++i) x[i] += y[i];
    return x;
  };
  // Gram of B on the E basis
  std::vector<std::vector<mpq_class>> G(dim, std::vector<mpq_class>(dim));
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j) {
      mpq_class bij = L.Q(addv(col(i), col(j))) - L.Q(col(i)) - L.Q(col(j));
      bij.canonicalize();
      G[i][j] = bij;
    }
  mpz_class q(1);
  for (auto& row : G)
    for (auto& g : row) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), g.get_den().get_mpz_t());
  linalg::Mat P(dim, std::vector<mpz_class>(dim));
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j) P[i][j] = G[i][j].get_num() * (q / G[i][j].get_den());
  linalg::Mat K = linalg::kernel_mod(P, q);
  // sanity: the inner lattice must be even, i.e. Q integral on its basis
  for (size_t j = 0; j < dim; ++j) {
    std::vector<mpz_class> v(dim, 0);
    for (size_t i = 0; i < dim; ++i)
      for (size_t k = 0; k < dim; ++k) v[i] += E[i][k] * K[k][j];
    mpq_class qq = L.Q(v);
    if (qq.get_den() != 1) throw error("build_phiN: inner lattice is not even");
  }

  linalg::SNF snf = linalg::smith_normal_form(K);
  PhiN out;
  out.D1 = D1;
  out.D2 = D2;
  out.N = N;
  mpz_class expect = mpz_class(N) * N * N * N;
  expect *= mpz_class(std::labs(D1)) * std::labs(D1) * std::labs(D1);
  expect *= mpz_class(D2) * D2;
  out.module_order_expected = expect.get_ui();

  std::vector<long> orders;
  std::vector<size_t> kept;
  mpz_class total(1);
  for (size_t i = 0; i < dim; ++i) {
    mpz_class d = ::abs(snf.diag[i]);
    total *= d;
    if (d > 1) {
      orders.push_back(d.get_si());
      kept.push_back(i);
    }
  }
  if (total != expect)
    throw error("build_phiN: |dual/M| = " + total.get_str() + " but expected " + expect.get_str());

  // generators: columns of Uinv (e-coords) -> tuples
  std::vector<std::vector<mpz_class>> gen_tuple;
  for (size_t idx : kept) {
    std::vector<mpz_class> v(dim, 0);
    for (size_t i = 0; i < dim; ++i)
      for (size_t k = 0; k < dim; ++k) v[i] += E[i][k] * snf.Uinv[k][idx];
    gen_tuple.push_back(v);
  }
  size_t r = orders.size();
  std::vector<mpq_class> qdiag(r);
  std::vector<std::vector<mpq_class>> bmat(r, std::vector<mpq_class>(r));
  for (size_t i = 0; i < r; ++i) {
    qdiag[i] = mod1q(L.Q(gen_tuple[i]));
    for (size_t j = 0; j < r; ++j)
      bmat[i][j] = mod1q(L.Q(addv(gen_tuple[i], gen_tuple[j])) - L.Q(gen_tuple[i]) - L.Q(gen_tuple[j]));
  }
  out.module = std::make_shared<FiniteQuadraticModule>(orders, qdiag, bmat);
  for (const auto& t : gen_tuple) {
    std::vector<long> tl(dim);
    for (size_t i = 0; i < dim; ++i) tl[i] = t[i].get_si();
    out.tuple_of_gen.push_back(tl);
  }
  const auto& A = *out.module;

  // a tuple (with correct parity) -> A coordinates through U
  auto acoords_of_tuple = [&](const std::vector<mpz_class>& t) {
    long cpar = ((t[4] % 2) + 2) % 2 == 0 ? 0 : 1;
    long dpar = ((t[5] % 2) + 2) % 2 == 0 ? 0 : 1;
    if (DF % 2 == 0) {
      if (dpar != 0) throw error("build_phiN: tuple parity (d even) violated");
    } else if (cpar != dpar) {
      throw error("build_phiN: tuple parity c = d mod 2 violated");
    }
    // e-coords
    std::vector<mpz_class> e(dim);
    e[0] = t[0];
    e[1] = t[1];
    e[2] = t[2];
    e[3] = t[3];
    if (DF % 2 == 0) {
      e[4] = t[4];
      e[5] = t[5] / 2;
    } else {
      e[4] = t[4];
      e[5] = (t[5] - t[4]) / 2;
    }
    std::vector<long> x(r);
    for (size_t i = 0; i < r; ++i) {
      mpz_class acc(0);
      for (size_t k = 0; k < dim; ++k) acc += snf.U[kept[i]][k] * e[k];
      mpz_class red = acc % orders[i];
      x[i] = red.get_si();
    }
    return A.index(x);
  };

  // the embedding of the u_K module; its image must stay orthogonal to H
  long m1 = std::labs(D1);
  auto UK = uK_module(D1);
  long ninv = inv_mod(N % m1, m1);
  auto iota = [&](long a, long b, long ch) {
    long bpp = ((b * ninv) % m1 + m1) % m1;
    std::vector<mpz_class> t{0, 0, mpz_class(N) * a, mpz_class(N) * bpp, 2 * ch, 0};
    return acoords_of_tuple(t);
  };
  std::vector<uint64_t> iota_gens;
  {
    long g1[3] = {1, 0, 0}, g2[3] = {0, 1, 0}, g3[3] = {0, 0, 1};
    iota_gens.push_back(iota(g1[0], g1[1], g1[2]));
    iota_gens.push_back(iota(g2[0], g2[1], g2[2]));
    iota_gens.push_back(iota(g3[0], g3[1], g3[2]));
  }

  // isotropic subgroup generators
  std::vector<uint64_t> mus;
  {
    std::vector<mpz_class> mu1{N, 0, 0, 0, 0, 2 * N};
    mus.push_back(acoords_of_tuple(mu1));
    if (N > 1) {
      mpz_class m2 = -mpz_class(D2) * L.nm_theta / N;
      std::vector<mpz_class> mu2{m2, mpz_class(D2) * L.B2, D1, mpz_class(N) * D1, 0, 0};
      mus.push_back(acoords_of_tuple(mu2));
    }
    mpz_class trnu = (mpz_class(L.B2) * L.B2 + D2) / 2;
    std::vector<mpz_class> mu3{D, 0, mpz_class(N) * D1, mpz_class(D) * trnu, 0, 0};
    mus.push_back(acoords_of_tuple(mu3));
  }

  auto close = [&](const std::vector<uint64_t>& gens) {
    std::set<uint64_t> cl{0};
    std::vector<uint64_t> frontier{0};
    while (!frontier.empty()) {
      std::vector<uint64_t> next;
      for (uint64_t x : frontier)
        for (uint64_t g : gens) {
          uint64_t y = A.add(x, g);
          if (cl.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return std::vector<uint64_t>(cl.begin(), cl.end());
  };
  out.H = close(mus);
  out.H_expected = static_cast<uint64_t>(N) * N * std::labs(D2);

  // H^perp generators via integer kernel over the A coordinates
  auto perp_data = [&](const std::vector<uint64_t>& hgens) {
    mpz_class qq(1);
    std::vector<std::vector<mpq_class>> rows;
    for (uint64_t g : hgens) {
      std::vector<mpq_class> row(r);
      for (size_t i = 0; i < r; ++i) {
        long e1[16] = {0};
        e1[i] = 1;
        row[i] = A.B(A.index(e1), g);
        mpz_lcm(qq.get_mpz_t(), qq.get_mpz_t(), row[i].get_den().get_mpz_t());
      }
      rows.push_back(row);
    }
    linalg::Mat C(rows.size(), std::vector<mpz_class>(r));
    for (size_t j = 0; j < rows.size(); ++j)
      for (size_t i = 0; i < r; ++i) C[j][i] = rows[j][i].get_num() * (qq / rows[j][i].get_den());
    linalg::Mat Kp = linalg::kernel_mod(C, qq);
    // add the order lattice and take a basis
    linalg::Mat KE(r, std::vector<mpz_class>(Kp[0].size() + r, 0));
    for (size_t i = 0; i < r; ++i) {
      for (size_t j = 0; j < Kp[0].size(); ++j) KE[i][j] = Kp[i][j];
      KE[i][Kp[0].size() + i] = orders[i];
    }
    return linalg::column_lattice_basis(KE);
  };

  // enumerate the quotient  perp_lattice / order_lattice  as A elements
  auto enumerate_quotient = [&](const linalg::Mat& T) {
    linalg::Mat O(r, std::vector<mpz_class>(r, 0));
    for (size_t i = 0; i < r; ++i) O[i][i] = orders[i];
    linalg::Mat X(r, std::vector<mpz_class>(r));
    for (size_t j = 0; j < r; ++j) {
      std::vector<mpz_class> b(r);
      for (size_t i = 0; i < r; ++i) b[i] = O[i][j];
      auto sol = linalg::solve_rational(T, b);
      for (size_t i = 0; i < r; ++i) {
        if (sol[i].get_den() != 1) throw error("build_phiN: order lattice not inside perp");
        X[i][j] = sol[i].get_num();
      }
    }
    linalg::SNF s2 = linalg::smith_normal_form(X);
    linalg::Mat Gq = linalg::mul(T, s2.Uinv);
    std::vector<long> qorders;
    std::vector<std::vector<long>> qgens;
    for (size_t i = 0; i < r; ++i) {
      mpz_class d = ::abs(s2.diag[i]);
      if (d == 1) continue;
      qorders.push_back(d.get_si());
      std::vector<long> g(r);
      for (size_t k = 0; k < r; ++k) {
        mpz_class red = Gq[k][i] % orders[k];
        g[k] = red.get_si();
      }
      qgens.push_back(g);
    }
    // mixed radix enumeration
    std::vector<uint64_t> elems;
    uint64_t total = 1;
    for (long d : qorders) total *= static_cast<uint64_t>(d);
    elems.reserve(total);
    std::vector<long> idx(qorders.size(), 0);
    for (uint64_t c = 0; c < total; ++c) {
      std::vector<long> x(r, 0);
      for (size_t i = 0; i < qorders.size(); ++i)
        for (size_t k = 0; k < r; ++k) x[k] += idx[i] * qgens[i][k];
      elems.push_back(A.index(x));
      for (size_t i = qorders.size(); i-- > 0;) {
        if (++idx[i] < qorders[i]) break;
        idx[i] = 0;
      }
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return elems;
  };

  // grow H by isotropic extensions if the seed generators degenerate
  // (N = 1 collapses mu_2 and can trivialize mu_3); candidates must stay
  // isotropic, orthogonal to H and to the iota image
  if (out.H.size() < out.H_expected) {
    std::vector<uint64_t> constraint_gens = mus;
    constraint_gens.insert(constraint_gens.end(), iota_gens.begin(), iota_gens.end());
    for (int round = 0; round < 16 && out.H.size() < out.H_expected; ++round) {
      auto candidates = enumerate_quotient(perp_data(constraint_gens));
      std::unordered_set<uint64_t> hset0(out.H.begin(), out.H.end());
      bool grew = false;
      for (uint64_t z : candidates) {
        if (hset0.count(z) || A.Q(z) != 0) continue;
        bool orth = true;
        for (uint64_t h : out.H)
          if (A.B(z, h) != 0) {
            orth = false;
            break;
          }
        if (!orth) continue;
        mus.push_back(z);
        auto trial = close(mus);
        if (trial.size() > out.H_expected) {
          mus.pop_back();
          continue;
        }
        out.H = std::move(trial);
        constraint_gens.push_back(z);
        grew = true;
        break;
      }
      if (!grew) break;
    }
  }
  if (out.H.size() != out.H_expected)
    throw error("build_phiN: |H| = " + std::to_string(out.H.size()) + " but expected " +
                std::to_string(out.H_expected));
  for (uint64_t h : out.H)
    if (A.Q(h) != 0) throw error("build_phiN: H is not isotropic");
  std::vector<uint64_t> perp = enumerate_quotient(perp_data(mus));
  out.perp_order = perp.size();
  if (out.perp_order * out.H.size() != A.size())
    throw error("build_phiN: |H^perp| != |A|/|H|");

  // decomposition checks for the iota image
  WeilVector uk = fundamental_invariant_uK(D1);
  std::unordered_set<uint64_t> hset(out.H.begin(), out.H.end());
  std::unordered_set<uint64_t> perpset(perp.begin(), perp.end());
  std::unordered_set<uint64_t> image;
  long xc[3];
  for (uint64_t mu = 0; mu < UK->size(); ++mu) {
    UK->coords(mu, xc);
    uint64_t im = iota(xc[0], xc[1], xc[2]);
    // isometry
    if (mod1q(A.Q(im) - UK->Q(mu)) != 0) throw error("build_phiN: iota is not an isometry");
    if (!perpset.count(im)) throw error("build_phiN: iota image not inside H^perp");
    if (mu != 0 && hset.count(im)) throw error("build_phiN: iota image meets H");
    if (!image.insert(im).second) throw error("build_phiN: iota not injective");
  }
  if (image.size() * out.H.size() != out.perp_order)
    throw error("build_phiN: H^perp != H + iota image");

  // the induced vector: phi = sum over u_K support of u_K(mu) Char(iota(mu) + H)
  std::unordered_map<uint64_t, int> supp;
  for (uint64_t mu = 0; mu < UK->size(); ++mu) {
    double v = uk[mu].re.to_double();
    if (v == 0) continue;
    int val = v > 0 ? 1 : -1;
    UK->coords(mu, xc);
    uint64_t base = iota(xc[0], xc[1], xc[2]);
    for (uint64_t h : out.H) {
      uint64_t id = A.add(base, h);
      auto [it, fresh] = supp.emplace(id, val);
      if (!fresh) throw error("build_phiN: overlapping support cosets");
    }
  }
  out.support.assign(supp.begin(), supp.end());
  std::sort(out.support.begin(), out.support.end());

  // rho(T) fixes phi exactly iff Q vanishes on the support
  out.T_fixes_exactly = true;
  for (const auto& [id, val] : out.support)
    if (A.Q(id) != 0) {
      out.T_fixes_exactly = false;
      break;
    }
  return out;
}

double sparse_S_residual(const PhiN& phi) {
  const auto& A = *phi.module;
  if (!A.nondegenerate()) throw validation_error("sparse_S_residual: degenerate module");
  size_t r = A.rank();
  size_t m = phi.support.size();
  long den = A.den();
  // pairing rows per support element
  std::vector<long> coords(m * r);
  std::vector<int> vals(m);
  for (size_t i = 0; i < m; ++i) {
    A.coords(phi.support[i].first, &coords[i * r]);
    vals[i] = phi.support[i].second;
  }
  std::vector<std::vector<long>> bn(r, std::vector<long>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      long e1[16] = {0}, e2[16] = {0};
      e1[i] = 1;
      e2[j] = 1;
      bn[i][j] = A.Bnum(e1, e2);
    }
  std::vector<long> prow(m * r);
  for (size_t s = 0; s < m; ++s)
    for (size_t j = 0; j < r; ++j) {
      __int128 acc = 0;
      for (size_t i = 0; i < r; ++i) acc += static_cast<__int128>(coords[s * r + i]) * bn[i][j];
      long v = static_cast<long>(acc % den);
      prow[s * r + j] = v < 0 ? v + den : v;
    }
  // exact integer histogram over phase classes:
  //   count[k] = sum over pairs with (g,d) = k/den of phi(g) phi(d)
  // then <S phi, phi> = e(-sig/8)/sqrt|A| sum_k count[k] e(-k/den) evaluated
  // in high precision, so the residual is resolved far below double epsilon.
  unsigned nt = worker_count();
  std::vector<std::vector<long>> hist(nt, std::vector<long>(den, 0));
  parallel_for(nt, [&](size_t tid) {
    auto& h = hist[tid];
    for (size_t g = tid; g < m; g += nt) {
      const long* pg = &prow[g * r];
      long vg = vals[g];
      for (size_t d = 0; d < m; ++d) {
        const long* y = &coords[d * r];
        __int128 acc = 0;
        for (size_t j = 0; j < r; ++j) acc += static_cast<__int128>(pg[j]) * y[j];
        long k = static_cast<long>(acc % den);
        if (k < 0) k += den;
        h[k] += vg * vals[d];
      }
    }
  });
  std::vector<long> count(den, 0);
  for (const auto& h : hist)
    for (long k = 0; k < den; ++k) count[k] += h[k];

  ScopedPrecision sp(256);
  Complex s{Real(0L)};
  for (long k = 0; k < den; ++k)
    if (count[k]) s += Real(count[k]) * e2pi(mpq_class(-k, den));
  int sig = A.signature_mod8();
  Complex in = e2pi(mpq_class(-sig, 8)) * s / sqrt(Real(static_cast<long>(A.size())));
  Real resid2 = Real(2L * static_cast<long>(m)) - 2L * in.re;
  if (resid2 < 0L) resid2 = Real(0L);
  return (sqrt(resid2) / sqrt(Real(static_cast<long>(m)))).to_double();
}

}  // namespace fqm
}  // namespace weillift
