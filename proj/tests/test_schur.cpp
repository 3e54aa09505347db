#include "doctest.h"
#include "pfcalc/schur.hpp"

#include <functional>
#include <random>

using namespace pfcalc;

namespace {

using AlgPtr = std::shared_ptr<const SchurAlgebra>;

AlgPtr alg(std::size_t n, unsigned d, BaseRing r = BaseRing::integers()) {
  return std::make_shared<const SchurAlgebra>(n, d, r);
}

std::size_t idx(const AlgPtr& A, std::vector<unsigned> e) { return A->index_of(Monomial(e)); }

mpz_class factorial(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

// Coefficient of x^alpha y^beta in z^gamma, summed over n x n x n tables T
// with sum_j T_ijl = gamma_il, sum_l T_ijl = alpha_ij, sum_i T_ijl = beta_jl.
mpz_class contingency_oracle(std::size_t n, const Monomial& a, const Monomial& b, const Monomial& g) {
  std::vector<unsigned> T(n * n * n, 0);
  mpz_class total = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t cell) {
    if (cell == n * n * n) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          unsigned sa = 0;
          for (std::size_t l = 0; l < n; ++l) sa += T[(i * n + j) * n + l];
          if (sa != a[i * n + j]) return;
        }
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          unsigned s = 0;
          for (std::size_t i = 0; i < n; ++i) s += T[(i * n + j) * n + l];
          if (s != b[j * n + l]) return;
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          unsigned s = 0;
          for (std::size_t j = 0; j < n; ++j) s += T[(i * n + j) * n + l];
          if (s != g[i * n + l]) return;
        }
      mpz_class term = 1;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          term *= factorial(g[i * n + l]);
          for (std::size_t j = 0; j < n; ++j) term /= factorial(T[(i * n + j) * n + l]);
        }
      total += term;
      return;
    }
    std::size_t i = cell / (n * n), l = cell % n;
    unsigned cap = g[i * n + l];
    for (unsigned v = 0; v <= cap; ++v) {
      T[cell] = v;
      rec(cell + 1);
    }
    T[cell] = 0;
  };
  rec(0);
  return total;
}

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

RingMatrix random_matrix(std::mt19937_64& rng, const BaseRing& R, std::size_t n, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  RingMatrix m(n, std::vector<RingElem>(n, RingElem::zero(R)));
  for (auto& row : m)
    for (auto& x : row) x = RingElem(R, d(rng));
  return m;
}

std::vector<RingElem> vec(const BaseRing& R, std::initializer_list<long> xs) {
  std::vector<RingElem> v;
  for (long x : xs) v.push_back(RingElem(R, x));
  return v;
}

bool stable(const SchurModule& M, const std::vector<std::vector<RingElem>>& basis) {
  return with_field(M.ring(), [&](const auto& k) {
    using F = std::decay_t<decltype(k)>;
    EchelonBasis<F> eb(k, M.rank);
    for (const auto& b : basis) {
      std::vector<typename F::Scalar> s;
      for (const auto& x : b) s.push_back(to_scalar(k, x));
      eb.insert(s);
    }
    for (std::size_t a = 0; a < M.action.size(); ++a)
      for (const auto& b : basis) {
        auto w = M.apply(a, b);
        std::vector<typename F::Scalar> s;
        for (const auto& x : w) s.push_back(to_scalar(k, x));
        if (!eb.contains(s)) return false;
      }
    return true;
  });
}

}  // namespace

TEST_CASE("dimension of the Schur algebra") {
  for (auto [n, d] : std::vector<std::pair<std::size_t, unsigned>>{{1, 3}, {2, 2}, {2, 3}, {3, 2}})
    CHECK(alg(n, d)->dimension() == binom(n * n + d, d));
}

TEST_CASE("structure constant examples") {
  auto A = alg(1, 1);
  auto s0 = SchurElem::basis(A, idx(A, {0})), s1 = SchurElem::basis(A, idx(A, {1}));
  CHECK(s0 * s0 == s0);
  CHECK((s0 * s1).coefficients().empty());
  CHECK(s1 * s1 == s1);
  for (auto [n, d] : std::vector<std::pair<std::size_t, unsigned>>{{1, 2}, {2, 2}, {3, 1}}) {
    auto B = alg(n, d);
    auto z = SchurElem::basis(B, 0);
    CHECK(z * z == z);
  }
  auto C = alg(2, 1);
  auto e12 = SchurElem::basis(C, idx(C, {0, 1, 0, 0}));
  auto e21 = SchurElem::basis(C, idx(C, {0, 0, 1, 0}));
  CHECK(e12 * e21 == SchurElem::basis(C, idx(C, {1, 0, 0, 0})));
  CHECK(structure_constants(C, idx(C, {0, 1, 0, 0}), idx(C, {0, 0, 1, 0})) == e12 * e21);
  CHECK_THROWS(structure_constants(C, 99, 0));
}

TEST_CASE("structure constants agree with the contingency-table count") {
  for (auto [n, d] : std::vector<std::pair<std::size_t, unsigned>>{{1, 3}, {2, 2}, {2, 3}}) {
    auto A = alg(n, d);
    const auto& basis = A->basis_index();
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        if (basis[a].total_degree() != basis[b].total_degree()) {
          CHECK(A->product_terms(a, b).empty());
          continue;
        }
        std::map<std::size_t, mpz_class> got;
        for (const auto& [g, c] : A->product_terms(a, b)) got[g] = c;
        for (std::size_t g = 0; g < basis.size(); ++g) {
          if (basis[g].total_degree() != basis[a].total_degree()) continue;
          mpz_class want = contingency_oracle(n, basis[a], basis[b], basis[g]);
          CHECK((got.count(g) ? got[g] : mpz_class(0)) == want);
        }
      }
  }
}

TEST_CASE("associativity") {
  for (unsigned d = 1; d <= 3; ++d) {
    auto A = alg(1, d);
    for (std::size_t a = 0; a < A->dimension(); ++a)
      for (std::size_t b = 0; b < A->dimension(); ++b)
        for (std::size_t c = 0; c < A->dimension(); ++c) {
          auto x = SchurElem::basis(A, a), y = SchurElem::basis(A, b), z = SchurElem::basis(A, c);
          CHECK((x * y) * z == x * (y * z));
        }
  }
  std::mt19937_64 rng(21);
  for (unsigned d : {2u, 3u}) {
    auto A = alg(2, d);
    std::uniform_int_distribution<std::size_t> pick(0, A->dimension() - 1);
    for (int t = 0; t < 200; ++t) {
      auto x = SchurElem::basis(A, pick(rng)), y = SchurElem::basis(A, pick(rng)), z = SchurElem::basis(A, pick(rng));
      CHECK((x * y) * z == x * (y * z));
    }
  }
}

TEST_CASE("identity element") {
  auto A = alg(1, 1);
  auto e = identity_element(A);
  CHECK(e == SchurElem::basis(A, 0) + SchurElem::basis(A, 1));
  auto B = alg(1, 3);
  auto eb = identity_element(B);
  CHECK(eb.coefficients().size() == 4);
  for (auto [n, d] : std::vector<std::pair<std::size_t, unsigned>>{{2, 2}, {2, 3}}) {
    auto C = alg(n, d);
    auto ec = identity_element(C);
    CHECK(ec * ec == ec);
  }
}

TEST_CASE("evaluation embedding") {
  BaseRing ZZ = BaseRing::integers();
  auto A = alg(2, 2);
  CHECK(evaluation_embed(A, ring_identity(ZZ, 2)) == identity_element(A));
  auto B = alg(1, 2);
  auto ev = evaluation_embed(B, {{RingElem(ZZ, 3L)}});
  CHECK(ev.coefficient(idx(B, {0})) == RingElem(ZZ, 1L));
  CHECK(ev.coefficient(idx(B, {1})) == RingElem(ZZ, 3L));
  CHECK(ev.coefficient(idx(B, {2})) == RingElem(ZZ, 9L));

  BaseRing F5 = BaseRing::prime_field(5);
  std::mt19937_64 rng(2);
  for (unsigned d : {2u, 3u}) {
    auto C = alg(2, d, F5);
    for (int t = 0; t < 50; ++t) {
      auto phi = random_matrix(rng, F5, 2, 0, 4), psi = random_matrix(rng, F5, 2, 0, 4);
      CHECK(evaluation_embed(C, phi) * evaluation_embed(C, psi) ==
            evaluation_embed(C, ring_matrix_product(phi, psi, F5)));
    }
  }
}

TEST_CASE("modules of functors") {
  BaseRing ZZ = BaseRing::integers();
  auto id = module_of_functor(evaluate(FunctorExpr::id(), 1), 1);
  CHECK(id.action[idx(id.algebra, {1})][0][0] == RingElem(ZZ, 1L));
  CHECK(id.action[idx(id.algebra, {0})][0][0].is_zero());
  auto s2 = module_of_functor(evaluate(FunctorExpr::sym(2), 1), 2);
  CHECK(s2.action[idx(s2.algebra, {2})][0][0] == RingElem(ZZ, 1L));
  CHECK(s2.action[idx(s2.algebra, {1})][0][0].is_zero());
  CHECK(s2.action[idx(s2.algebra, {0})][0][0].is_zero());

  // S^2 on rank 2, basis x^2, xy, y^2: the matrix of g = (a b; c d) is
  // [[a^2, ab, b^2], [2ac, ad+bc, 2bd], [c^2, cd, d^2]].
  auto m = module_of_functor(evaluate(FunctorExpr::sym(2), 2), 2);
  auto& A = m.algebra;
  CHECK(m.action[idx(A, {1, 1, 0, 0})][0][1] == RingElem(ZZ, 1L));
  CHECK(m.action[idx(A, {1, 0, 1, 0})][1][0] == RingElem(ZZ, 2L));
  CHECK(m.action[idx(A, {1, 0, 0, 1})][1][1] == RingElem(ZZ, 1L));
  CHECK(m.action[idx(A, {0, 1, 1, 0})][1][1] == RingElem(ZZ, 1L));
  CHECK(m.action[idx(A, {0, 1, 0, 1})][1][2] == RingElem(ZZ, 2L));
  CHECK(m.action[idx(A, {0, 0, 0, 2})][2][2] == RingElem(ZZ, 1L));

  CHECK_THROWS(module_of_functor(evaluate(FunctorExpr::sym(3), 2), 2));
  CHECK_THROWS(module_of_functor(evaluate(FunctorExpr::parse("Const(ZZ/2)"), 2), 1));
}

TEST_CASE("representation property and unit action") {
  std::mt19937_64 rng(17);
  std::vector<std::pair<std::string, unsigned>> cases{
      {"Sym(2)", 2}, {"Ext(2)", 2}, {"Tensor(Id, Id)", 2}, {"Dual(Sym(2))", 2}, {"Sym(2) (+) Id", 2}, {"Sym(3)", 3},
      {"Const(ZZ) (+) Id", 2}};
  for (const auto& [s, d] : cases) {
    auto M = module_of_functor(evaluate(FunctorExpr::parse(s), 2), d);
    const BaseRing& R = M.ring();
    CHECK(M.matrix_of(identity_element(M.algebra)) == ring_identity(R, M.rank));
    std::uniform_int_distribution<std::size_t> pick(0, M.algebra->dimension() - 1);
    for (int t = 0; t < 60; ++t) {
      std::size_t a = pick(rng), b = pick(rng);
      INFO(s << " " << a << " " << b);
      CHECK(M.matrix_of(structure_constants(M.algebra, a, b)) == ring_matrix_product(M.action[a], M.action[b], R));
    }
    // ev_psi acts by P(psi).
    auto psi = random_matrix(rng, R, 2, -3, 3);
    std::vector<std::vector<long>> raw(2, std::vector<long>(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) raw[i][j] = psi[i][j].as_integer().get_si();
    auto L = apply_law(FunctorExpr::parse(s), PolyMatrix::from_integers(raw)).to_integers();
    auto E = M.matrix_of(evaluation_embed(M.algebra, psi));
    for (std::size_t i = 0; i < M.rank; ++i)
      for (std::size_t j = 0; j < M.rank; ++j) CHECK(E[i][j].as_integer() == L[i][j]);
  }
}

TEST_CASE("action under a change of basis of U") {
  // For g in GL_2(ZZ): P(g) * act(ev_{g^-1 psi g}) = act(ev_psi) * P(g).
  BaseRing ZZ = BaseRing::integers();
  std::mt19937_64 rng(23);
  auto e = FunctorExpr::sym(2);
  auto M = module_of_functor(evaluate(e, 2), 2);
  auto toRing = [&](const std::vector<std::vector<long>>& a) {
    RingMatrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (long x : a[i]) r[i].push_back(RingElem(ZZ, x));
    return r;
  };
  for (int t = 0; t < 10; ++t) {
    long s = static_cast<long>(rng() % 5) - 2, u = static_cast<long>(rng() % 5) - 2;
    std::vector<std::vector<long>> g{{1 + s * u, s}, {u, 1}}, ginv{{1, -s}, {-u, 1 + s * u}};
    auto psi = random_matrix(rng, ZZ, 2, -3, 3);
    auto conj = ring_matrix_product(ring_matrix_product(toRing(ginv), psi, ZZ), toRing(g), ZZ);
    auto Pg = apply_law(e, PolyMatrix::from_integers(g)).to_integers();
    RingMatrix Pgr(Pg.size());
    for (std::size_t i = 0; i < Pg.size(); ++i)
      for (const auto& x : Pg[i]) Pgr[i].push_back(RingElem(ZZ, x));
    auto lhs = ring_matrix_product(Pgr, M.matrix_of(evaluation_embed(M.algebra, conj)), ZZ);
    auto rhs = ring_matrix_product(M.matrix_of(evaluation_embed(M.algebra, psi)), Pgr, ZZ);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("spinning") {
  auto S3 = base_change_module(module_of_functor(evaluate(FunctorExpr::sym(3), 2), 3), 3);
  const BaseRing& F3 = S3.ring();
  CHECK(spin(S3, vec(F3, {0, 0, 0, 0})).empty());
  auto cubes = spin(S3, vec(F3, {1, 0, 0, 0}));
  CHECK(cubes.size() == 2);
  CHECK(cubes == std::vector<std::vector<RingElem>>{vec(F3, {1, 0, 0, 0}), vec(F3, {0, 0, 0, 1})});
  CHECK(spin(S3, vec(F3, {0, 1, 0, 0})).size() == 4);
  CHECK(stable(S3, cubes));

  auto S2 = module_of_functor(evaluate(FunctorExpr::sym(2), 2), 2);
  auto S2f2 = base_change_module(S2, 2);
  auto sq = spin(S2f2, vec(S2f2.ring(), {1, 0, 0}));
  CHECK(sq == std::vector<std::vector<RingElem>>{vec(S2f2.ring(), {1, 0, 0}), vec(S2f2.ring(), {0, 0, 1})});
  auto S2q = base_change_module(S2, 0);
  CHECK(spin(S2q, vec(S2q.ring(), {1, 0, 0})).size() == 3);
  CHECK_THROWS(spin(S2, vec(BaseRing::integers(), {1, 0, 0})));

  std::mt19937_64 rng(6);
  for (std::uint64_t p : {2, 3, 5}) {
    auto M = base_change_module(module_of_functor(evaluate(FunctorExpr::parse("Sym(2) (+) Ext(2)"), 2), 2), p);
    for (int t = 0; t < 10; ++t) {
      std::vector<RingElem> v;
      for (std::size_t i = 0; i < M.rank; ++i) v.push_back(RingElem(M.ring(), static_cast<long>(rng() % p)));
      CHECK(stable(M, spin(M, v)));
    }
  }
}

TEST_CASE("base change keeps the algebra invariants") {
  auto M = base_change_module(module_of_functor(evaluate(FunctorExpr::sym(2), 2), 2), 2);
  CHECK(M.matrix_of(identity_element(M.algebra)) == ring_identity(M.ring(), M.rank));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, M.algebra->dimension() - 1);
  for (int t = 0; t < 50; ++t) {
    std::size_t a = pick(rng), b = pick(rng);
    CHECK(M.matrix_of(structure_constants(M.algebra, a, b)) == ring_matrix_product(M.action[a], M.action[b], M.ring()));
  }
}

TEST_CASE("symmetric and divided squares at p = 2") {
  auto S = base_change_module(module_of_functor(evaluate(FunctorExpr::sym(2), 2), 2), 2);
  auto G = base_change_module(module_of_functor(evaluate(FunctorExpr::parse("Dual(Sym(2))"), 2), 2), 2);
  auto ps = probe_irreducibility(S, 20, 1), pg = probe_irreducibility(G, 20, 1);
  CHECK(ps.proper_submodule_found);
  CHECK(pg.proper_submodule_found);
  CHECK(ps.smallest.size() == 2);
  CHECK(pg.smallest.size() == 1);
  auto Q = base_change_module(module_of_functor(evaluate(FunctorExpr::sym(2), 2), 2), 0);
  CHECK_FALSE(probe_irreducibility(Q, 20, 1).proper_submodule_found);
}
