#include "weillift/fqm.hpp"

#include <algorithm>
#include <cmath>
#include <cmath>
#include <random>
#include <set>

#include "weillift/errors.hpp"
#include "weillift/parallel.hpp"

namespace weillift {
namespace fqm {

namespace {

mpq_class mod1(mpq_class q) {
  q.canonicalize();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  q -= fl;
  q.canonicalize();
  return q;
}

long lcm_long(long a, long b) {
  return a / std::gcd(a, b) * b;
}

}  // namespace

FiniteQuadraticModule::FiniteQuadraticModule(std::vector<long> orders,
                                             std::vector<mpq_class> qdiag,
                                             std::vector<std::vector<mpq_class>> bmat)
    : orders_(std::move(orders)), qdiag_(std::move(qdiag)), bmat_(std::move(bmat)) {
  size_ = 1;
  for (long d : orders_) {
    if (d < 1) throw validation_error("FQM: orders must be positive");
    size_ *= static_cast<uint64_t>(d);
  }
  for (auto& q : qdiag_) q = mod1(q);
  for (auto& row : bmat_)
    for (auto& q : row) q = mod1(q);
  den_ = 1;
  for (const auto& q : qdiag_) den_ = lcm_long(den_, static_cast<long>(q.get_den().get_si()));
  for (const auto& row : bmat_)
    for (const auto& q : row) den_ = lcm_long(den_, static_cast<long>(q.get_den().get_si()));
  qnum_.resize(rank());
  bnum_.assign(rank(), std::vector<long>(rank()));
  for (size_t i = 0; i < rank(); ++i) {
    qnum_[i] = mpz_class(qdiag_[i].get_num() * (den_ / qdiag_[i].get_den())).get_si();
    for (size_t j = 0; j < rank(); ++j)
      bnum_[i][j] = mpz_class(bmat_[i][j].get_num() * (den_ / bmat_[i][j].get_den())).get_si();
  }
  validate();
}

void FiniteQuadraticModule::validate() const {
  size_t r = rank();
  if (qdiag_.size() != r || bmat_.size() != r)
    throw validation_error("FQM: inconsistent dimensions");
  for (size_t i = 0; i < r; ++i) {
    if (bmat_[i].size() != r) throw validation_error("FQM: inconsistent dimensions");
    // B(g_i, g_i) = 2 Q(g_i)
    if (mod1(2 * qdiag_[i] - bmat_[i][i]) != 0)
      throw validation_error("FQM: diagonal of B must be 2Q");
    for (size_t j = 0; j < r; ++j) {
      if (bmat_[i][j] != bmat_[j][i]) throw validation_error("FQM: B not symmetric");
      // d_i B(g_i, g_j) = 0 in Q/Z
      if (mod1(orders_[i] * bmat_[i][j]) != 0)
        throw validation_error("FQM: B not defined on the group");
    }
    // Q(d_i g_i) = d_i^2 Q(g_i) = 0 in Q/Z
    if (mod1(mpq_class(orders_[i]) * orders_[i] * qdiag_[i]) != 0)
      throw validation_error("FQM: Q not defined on the group");
  }
}

FiniteQuadraticModule FiniteQuadraticModule::hyperbolic(long N) {
  if (N < 1) throw validation_error("hyperbolic: N >= 1");
  std::vector<mpq_class> q{mpq_class(0), mpq_class(0)};
  std::vector<std::vector<mpq_class>> b{{mpq_class(0), mpq_class(1, N)},
                                        {mpq_class(1, N), mpq_class(0)}};
  return FiniteQuadraticModule({N, N}, q, b);
}

FiniteQuadraticModule FiniteQuadraticModule::cyclic(long n, long a, long den) {
  mpq_class qd(a, den), bd(2 * a, den);
  qd.canonicalize();
  bd.canonicalize();
  return FiniteQuadraticModule({n}, {qd}, {{bd}});
}

FiniteQuadraticModule FiniteQuadraticModule::sym2(long m) {
  if (m < 2) throw validation_error("sym2: |Delta| >= 2");
  // coordinates (a, b, chat); Q = (ab - chat^2)/m
  std::vector<mpq_class> q{mpq_class(0), mpq_class(0), mpq_class(-1, m)};
  std::vector<std::vector<mpq_class>> b(3, std::vector<mpq_class>(3, mpq_class(0)));
  b[0][1] = b[1][0] = mpq_class(1, m);
  b[2][2] = mpq_class(-2, m);
  return FiniteQuadraticModule({m, m, m}, q, b);
}

FiniteQuadraticModule FiniteQuadraticModule::direct_sum(const FiniteQuadraticModule& x,
                                                        const FiniteQuadraticModule& y) {
  std::vector<long> orders = x.orders_;
  orders.insert(orders.end(), y.orders_.begin(), y.orders_.end());
  std::vector<mpq_class> q = x.qdiag_;
  q.insert(q.end(), y.qdiag_.begin(), y.qdiag_.end());
  size_t r = orders.size(), rx = x.rank();
  std::vector<std::vector<mpq_class>> b(r, std::vector<mpq_class>(r, mpq_class(0)));
  for (size_t i = 0; i < rx; ++i)
    for (size_t j = 0; j < rx; ++j) b[i][j] = x.bmat_[i][j];
  for (size_t i = 0; i < y.rank(); ++i)
    for (size_t j = 0; j < y.rank(); ++j) b[rx + i][rx + j] = y.bmat_[i][j];
  return FiniteQuadraticModule(std::move(orders), std::move(q), std::move(b));
}

FiniteQuadraticModule FiniteQuadraticModule::rescaled(int sign) const {
  if (sign == 1) return *this;
  std::vector<mpq_class> q = qdiag_;
  for (auto& x : q) x = -x;
  auto b = bmat_;
  for (auto& row : b)
    for (auto& x : row) x = -x;
  return FiniteQuadraticModule(orders_, std::move(q), std::move(b));
}

void FiniteQuadraticModule::coords(uint64_t id, long* x) const {
  for (size_t i = rank(); i-- > 0;) {
    x[i] = static_cast<long>(id % static_cast<uint64_t>(orders_[i]));
    id /= static_cast<uint64_t>(orders_[i]);
  }
}

std::vector<long> FiniteQuadraticModule::coords(uint64_t id) const {
  std::vector<long> x(rank());
  coords(id, x.data());
  return x;
}

uint64_t FiniteQuadraticModule::index(const long* x) const {
  uint64_t id = 0;
  for (size_t i = 0; i < rank(); ++i) {
    long d = orders_[i];
    long xi = x[i] % d;
    if (xi < 0) xi += d;
    id = id * static_cast<uint64_t>(d) + static_cast<uint64_t>(xi);
  }
  return id;
}

uint64_t FiniteQuadraticModule::add(uint64_t a, uint64_t b) const {
  size_t r = rank();
  long xa[16], xb[16];
  coords(a, xa);
  coords(b, xb);
  for (size_t i = 0; i < r; ++i) xa[i] += xb[i];
  return index(xa);
}

uint64_t FiniteQuadraticModule::neg(uint64_t a) const {
  size_t r = rank();
  long x[16];
  coords(a, x);
  for (size_t i = 0; i < r; ++i) x[i] = -x[i];
  return index(x);
}

uint64_t FiniteQuadraticModule::scalar_mul(long n, uint64_t a) const {
  size_t r = rank();
  long x[16];
  coords(a, x);
  for (size_t i = 0; i < r; ++i) {
    long d = orders_[i];
    x[i] = static_cast<long>((static_cast<__int128>(x[i]) * n) % d);
  }
  return index(x);
}

long FiniteQuadraticModule::Qnum(const long* x) const {
  size_t r = rank();
  __int128 acc = 0;
  for (size_t i = 0; i < r; ++i) {
    acc += static_cast<__int128>(x[i]) * x[i] % den_ * qnum_[i];
    for (size_t j = i + 1; j < r; ++j)
      acc += static_cast<__int128>(x[i]) * x[j] % den_ * bnum_[i][j];
  }
  long m = static_cast<long>(acc % den_);
  return m < 0 ? m + den_ : m;
}

long FiniteQuadraticModule::Bnum(const long* x, const long* y) const {
  size_t r = rank();
  __int128 acc = 0;
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      acc += static_cast<__int128>(x[i]) * y[j] % den_ * bnum_[i][j];
  long m = static_cast<long>(acc % den_);
  return m < 0 ? m + den_ : m;
}

mpq_class FiniteQuadraticModule::Q(uint64_t id) const {
  long x[16];
  coords(id, x);
  mpq_class q(Qnum(x), den_);
  q.canonicalize();
  return q;
}

mpq_class FiniteQuadraticModule::B(uint64_t a, uint64_t b) const {
  long x[16], y[16];
  coords(a, x);
  coords(b, y);
  mpq_class q(Bnum(x, y), den_);
  q.canonicalize();
  return q;
}

bool FiniteQuadraticModule::nondegenerate() const {
  // radical = { x : B(x, g_j) = 0 mod 1 for all j }; trivial iff the lattice
  // { x in Z^r : sum_i x_i bnum[i][j] = 0 mod den } equals span(d_i e_i).
  size_t r = rank();
  linalg::Mat cond(r, std::vector<mpz_class>(r));
  for (size_t j = 0; j < r; ++j)
    for (size_t i = 0; i < r; ++i) cond[j][i] = bnum_[i][j];
  linalg::Mat K = linalg::kernel_mod(cond, den_);
  // index of K in Z^r must equal prod d_i
  linalg::SNF s = linalg::smith_normal_form(K);
  mpz_class idx(1);
  for (const auto& d : s.diag) idx *= ::abs(d);
  mpz_class expect(1);
  for (long d : orders_) expect *= d;
  // K may not contain d_i e_i; radical size = expect / [Z^r : K + span(d_i e_i)]
  linalg::Mat KE(r, std::vector<mpz_class>(2 * r, 0));
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < r; ++j) KE[i][j] = K[i][j];
    KE[i][r + i] = orders_[i];
  }
  linalg::Mat B2 = linalg::column_lattice_basis(KE);
  linalg::SNF s2 = linalg::smith_normal_form(B2);
  mpz_class idx2(1);
  for (const auto& d : s2.diag) idx2 *= ::abs(d);
  return idx2 == expect;
}

int FiniteQuadraticModule::signature_mod8(double tol) const {
  if (sig_) return *sig_;
  // Gauss sum in double; accumulated error ~ sqrt(|A|) eps, fine below 1e-10
  // for tested sizes.
  std::vector<double> re(den_), im(den_);
  for (long k = 0; k < den_; ++k) {
    double t = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(den_);
    re[k] = std::cos(t);
    im[k] = std::sin(t);
  }
  size_t r = rank();
  double sre = 0, sim = 0;
  std::vector<long> x(r, 0);
  for (uint64_t id = 0; id < size_; ++id) {
    long qn = Qnum(x.data());
    sre += re[qn];
    sim += im[qn];
    for (size_t i = r; i-- > 0;) {
      if (++x[i] < orders_[i]) break;
      x[i] = 0;
    }
  }
  double mag = std::hypot(sre, sim);
  double root = std::sqrt(static_cast<double>(size_));
  if (std::abs(mag - root) > tol * root)
    throw validation_error("signature_mod8: Gauss sum magnitude off sqrt|A|; degenerate form");
  double angle = std::atan2(sim, sre) / (2.0 * M_PI) * 8.0;
  long sig = std::lround(angle);
  sig = ((sig % 8) + 8) % 8;
  if (std::abs(angle - std::lround(angle)) > 1e-6)
    throw validation_error("signature_mod8: Gauss sum angle not a multiple of 1/8");
  sig_ = static_cast<int>(sig);
  return *sig_;
}

Real WeilVector::norm() const {
  Real s(0L);
  for (const auto& z : v_) s += norm2(z);
  return sqrt(s);
}

WeilVector& WeilVector::operator+=(const WeilVector& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}
WeilVector& WeilVector::operator-=(const WeilVector& o) {
  for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}
WeilVector& WeilVector::operator*=(const Complex& c) {
  for (auto& z : v_) z *= c;
  return *this;
}

Complex inner(const WeilVector& a, const WeilVector& b) {
  Complex s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * conj(b[i]);
  return s;
}

namespace {

std::vector<Complex> root_table(long den, bool negate) {
  // e(-k/den) for k in [0, den) (or e(+k/den))
  std::vector<Complex> roots(den);
  for (long k = 0; k < den; ++k) {
    mpq_class x(negate ? -k : k, den);
    roots[k] = e2pi(x);
  }
  return roots;
}

}  // namespace

WeilVector weil_T(const WeilVector& v) {
  const auto& A = *v.module();
  auto roots = root_table(A.den(), false);
  WeilVector w(v.module());
  size_t r = A.rank();
  std::vector<long> x(r, 0);
  for (uint64_t id = 0; id < A.size(); ++id) {
    A.coords(id, x.data());
    w[id] = roots[A.Qnum(x.data())] * v[id];
  }
  return w;
}

WeilVector weil_S(const WeilVector& v) {
  const auto& A = *v.module();
  uint64_t n = A.size();
  size_t r = A.rank();
  long den = A.den();
  auto roots = root_table(den, true);
  int sig = A.signature_mod8();
  Complex front = e2pi(mpq_class(-sig, 8)) / sqrt(Real(static_cast<long>(n)));

  // per-element pairing rows: prow[id][j] = sum_i x_i bnum[i][j] mod den
  std::vector<long> coords_flat(n * r);
  for (uint64_t id = 0; id < n; ++id) A.coords(id, &coords_flat[id * r]);
  std::vector<std::vector<long>> bn(r, std::vector<long>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) {
      long e1[16] = {0}, e2[16] = {0};
      e1[i] = 1;
      e2[j] = 1;
      bn[i][j] = A.Bnum(e1, e2);
    }
  std::vector<long> prow(n * r);
  for (uint64_t id = 0; id < n; ++id) {
    const long* x = &coords_flat[id * r];
    for (size_t j = 0; j < r; ++j) {
      __int128 acc = 0;
      for (size_t i = 0; i < r; ++i) acc += static_cast<__int128>(x[i]) * bn[i][j];
      long m = static_cast<long>(acc % den);
      prow[id * r + j] = m < 0 ? m + den : m;
    }
  }

  WeilVector w(v.module());
  parallel_for(n, [&](size_t g) {
    // bucket v(d) by the phase index (g, d) mod den, then combine
    std::vector<Complex> bucket(den, Complex{Real(0L)});
    const long* pg = &prow[g * r];
    for (uint64_t d = 0; d < n; ++d) {
      if (v[d].is_zero()) continue;
      const long* y = &coords_flat[d * r];
      __int128 acc = 0;
      for (size_t j = 0; j < r; ++j) acc += static_cast<__int128>(pg[j]) * y[j];
      long k = static_cast<long>(acc % den);
      if (k < 0) k += den;
      bucket[k] += v[d];
    }
    Complex s;
    for (long k = 0; k < den; ++k)
      if (!bucket[k].is_zero()) s += roots[k] * bucket[k];
    w[g] = front * s;
  }, 64);
  return w;
}

WeilVector random_vector(FqmPtr mod, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WeilVector v(std::move(mod));
  for (size_t i = 0; i < v.size(); ++i) v[i] = Complex(u(rng), u(rng));
  return v;
}

IsotropicSubgroup IsotropicSubgroup::build(FqmPtr A, std::vector<std::vector<long>> gens) {
  IsotropicSubgroup H;
  H.ambient = A;
  H.gens = std::move(gens);
  std::set<uint64_t> closure{0};
  std::vector<uint64_t> frontier{0};
  std::vector<uint64_t> gids;
  for (const auto& g : H.gens) gids.push_back(A->index(g));
  while (!frontier.empty()) {
    std::vector<uint64_t> next;
    for (uint64_t x : frontier)
      for (uint64_t g : gids) {
        uint64_t y = A->add(x, g);
        if (closure.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  H.elements.assign(closure.begin(), closure.end());
  for (uint64_t h : H.elements)
    if (A->Q(h) != 0)
      throw validation_error("IsotropicSubgroup: generators span a non-isotropic group");
  // orthogonal complement by scan
  for (uint64_t x = 0; x < A->size(); ++x) {
    bool ok = true;
    for (uint64_t g : gids)
      if (A->B(x, g) != 0) {
        ok = false;
        break;
      }
    if (ok) H.perp.push_back(x);
  }
  if (H.elements.size() * H.perp.size() != A->size())
    throw validation_error("IsotropicSubgroup: |H| |H^perp| != |A|");
  return H;
}

Subquotient subquotient(const IsotropicSubgroup& H) {
  const auto& A = *H.ambient;
  size_t r = A.rank();
  // lattices in Z^r
  linalg::Mat top(r), bot(r);
  // columns: H^perp generators: use all perp elements (small modules only)
  // plus d_i e_i; bottom: H elements plus d_i e_i.
  auto add_col = [&](linalg::Mat& M, const std::vector<long>& v) {
    for (size_t i = 0; i < r; ++i) M[i].push_back(v[i]);
  };
  for (uint64_t x : H.perp) add_col(top, A.coords(x));
  for (uint64_t x : H.elements) add_col(bot, A.coords(x));
  for (size_t i = 0; i < r; ++i) {
    std::vector<long> e(r, 0);
    e[i] = A.orders()[i];
    add_col(top, e);
    add_col(bot, e);
  }
  linalg::Mat T = linalg::column_lattice_basis(top);
  linalg::Mat Bb = linalg::column_lattice_basis(bot);
  // X = T^{-1} Bb, integral
  size_t nb = Bb[0].size();
  linalg::Mat X(r, std::vector<mpz_class>(nb));
  for (size_t j = 0; j < nb; ++j) {
    std::vector<mpz_class> col(r);
    for (size_t i = 0; i < r; ++i) col[i] = Bb[i][j];
    auto x = linalg::solve_rational(T, col);
    for (size_t i = 0; i < r; ++i) {
      if (x[i].get_den() != 1)
        throw validation_error("subquotient: H not contained in H^perp lattice");
      X[i][j] = x[i].get_num();
    }
  }
  linalg::SNF s = linalg::smith_normal_form(X);
  // quotient generators: columns of T * Uinv, order diag[i]
  linalg::Mat G = linalg::mul(T, s.Uinv);
  std::vector<long> orders;
  std::vector<std::vector<long>> reps;
  for (size_t i = 0; i < r; ++i) {
    mpz_class d = i < s.diag.size() ? s.diag[i] : mpz_class(0);
    long di = std::abs(d.get_si());
    if (di == 1) continue;
    if (di == 0) throw validation_error("subquotient: infinite quotient");
    orders.push_back(di);
    std::vector<long> rep(r);
    for (size_t k = 0; k < r; ++k) rep[k] = static_cast<long>(mpz_class(G[k][i] % A.orders()[k]).get_si());
    reps.push_back(rep);
  }
  size_t nr = orders.size();
  std::vector<mpq_class> q(nr);
  std::vector<std::vector<mpq_class>> b(nr, std::vector<mpq_class>(nr));
  std::vector<uint64_t> rep_ids(nr);
  for (size_t i = 0; i < nr; ++i) rep_ids[i] = A.index(reps[i]);
  for (size_t i = 0; i < nr; ++i) {
    q[i] = A.Q(rep_ids[i]);
    for (size_t j = 0; j < nr; ++j) b[i][j] = A.B(rep_ids[i], rep_ids[j]);
  }
  Subquotient out;
  out.ambient = H.ambient;
  out.quotient = std::make_shared<FiniteQuadraticModule>(orders, q, b);
  out.rep_coords = reps;
  return out;
}

uint64_t Subquotient::rep_in_ambient(uint64_t qid) const {
  const auto& Aq = *quotient;
  const auto& A = *ambient;
  auto x = Aq.coords(qid);
  std::vector<long> acc(A.rank(), 0);
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t k = 0; k < A.rank(); ++k) acc[k] += x[i] * rep_coords[i][k];
  return A.index(acc);
}

WeilVector induce(const IsotropicSubgroup& H, const Subquotient& q, const WeilVector& w) {
  WeilVector v(H.ambient);
  const auto& A = *H.ambient;
  for (uint64_t mu = 0; mu < q.quotient->size(); ++mu) {
    if (w[mu].is_zero()) continue;
    uint64_t rep = q.rep_in_ambient(mu);
    for (uint64_t h : H.elements) v[A.add(rep, h)] += w[mu];
  }
  return v;
}

WeilVector restrict_to(const IsotropicSubgroup& H, const Subquotient& q, const WeilVector& v) {
  WeilVector w(q.quotient);
  const auto& A = *H.ambient;
  for (uint64_t mu = 0; mu < q.quotient->size(); ++mu) {
    uint64_t rep = q.rep_in_ambient(mu);
    Complex s;
    for (uint64_t h : H.elements) s += v[A.add(rep, h)];
    w[mu] = s;
  }
  return w;
}

}  // namespace fqm
}  // namespace weillift
