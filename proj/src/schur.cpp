#include "pfcalc/schur.hpp"

#include <deque>
#include <mutex>
#include <random>
#include <sstream>

namespace pfcalc {

RingMatrix ring_identity(const BaseRing& ring, std::size_t n) {
  RingMatrix m(n, std::vector<RingElem>(n, RingElem::zero(ring)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = RingElem::one(ring);
  return m;
}

RingMatrix ring_matrix_product(const RingMatrix& a, const RingMatrix& b, const BaseRing& ring) {
  const std::size_t inner = b.size(), cols = inner ? b[0].size() : 0;
  RingMatrix r(a.size(), std::vector<RingElem>(cols, RingElem::zero(ring)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != inner) throw Error("matrix product: dimension mismatch");
    for (std::size_t l = 0; l < inner; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    }
  }
  return r;
}

// ------------------------------------------------------------------- algebra

std::shared_ptr<const SchurAlgebra::Table> SchurAlgebra::table_for(std::size_t n, unsigned d) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const Table>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, d});
    if (it != cache.end()) return it->second;
  }
  auto t = std::make_shared<Table>();
  const std::size_t N = n * n;
  for (unsigned k = 0; k <= d; ++k)
    for (const auto& m : monomials_of_degree(N, k)) {
      t->index[m] = t->basis.size();
      t->basis.push_back(m);
    }

  // z_il = sum_j x_ij y_jl in variables x (first N) and y (next N).
  const BaseRing ZZ = BaseRing::integers();
  std::vector<std::string> names;
  for (const char* s : {"x", "y"})
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j) names.push_back(s + std::to_string(i) + "_" + std::to_string(j));
  VarSet V(names);
  std::vector<MultiPoly> z(N, MultiPoly(ZZ, V));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j)
        z[i * n + l] += MultiPoly::variable(ZZ, V, i * n + j) * MultiPoly::variable(ZZ, V, N + j * n + l);
  std::vector<std::vector<MultiPoly>> pw(N);
  for (std::size_t k = 0; k < N; ++k) {
    pw[k].push_back(MultiPoly::constant(ZZ, V, RingElem::one(ZZ)));
    for (unsigned e = 1; e <= d; ++e) pw[k].push_back(pw[k].back() * z[k]);
  }
  for (std::size_t g = 0; g < t->basis.size(); ++g) {
    const Monomial& gamma = t->basis[g];
    MultiPoly zg = pw[0][0];
    for (std::size_t k = 0; k < N; ++k)
      if (gamma[k]) zg = zg * pw[k][gamma[k]];
    for (const auto& [m, c] : zg.terms()) {
      Monomial a(N), b(N);
      for (std::size_t k = 0; k < N; ++k) {
        a.set(k, m[k]);
        b.set(k, m[N + k]);
      }
      t->products[{t->index.at(a), t->index.at(b)}].emplace_back(g, c.as_integer());
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[{n, d}] = t;
  return t;
}

SchurAlgebra::SchurAlgebra(std::size_t n, unsigned d, BaseRing ring)
    : n_(n), d_(d), ring_(std::move(ring)), table_(table_for(n, d)) {
  if (n == 0) throw Error("SchurAlgebra: rank must be positive");
}

SchurAlgebra SchurAlgebra::base_change(const BaseRing& ring) const { return SchurAlgebra(n_, d_, ring, table_); }

std::size_t SchurAlgebra::index_of(const Monomial& alpha) const {
  auto it = table_->index.find(alpha);
  if (it == table_->index.end()) throw Error("SchurAlgebra: multi-index outside the basis");
  return it->second;
}

std::string SchurAlgebra::alpha_to_string(std::size_t idx) const {
  if (idx >= dimension()) throw Error("SchurAlgebra: basis index out of range");
  const Monomial& a = table_->basis[idx];
  std::string s = "(";
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < n_; ++j) s += (j ? "," : "") + std::to_string(a[i * n_ + j]);
  }
  return s + ")";
}

const std::vector<std::pair<std::size_t, mpz_class>>& SchurAlgebra::product_terms(std::size_t alpha,
                                                                                   std::size_t beta) const {
  static const std::vector<std::pair<std::size_t, mpz_class>> none;
  if (alpha >= dimension() || beta >= dimension()) throw Error("SchurAlgebra: basis index out of range");
  auto it = table_->products.find({alpha, beta});
  return it == table_->products.end() ? none : it->second;
}

std::vector<StructureConstant> SchurAlgebra::structure_table() const {
  std::vector<StructureConstant> out;
  for (const auto& [ab, terms] : table_->products) {
    auto sorted = terms;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [g, c] : sorted) out.push_back({ab.first, ab.second, g, c});
  }
  return out;
}

// ------------------------------------------------------------------ elements

SchurElem::SchurElem(std::shared_ptr<const SchurAlgebra> A) : A_(std::move(A)) {}

SchurElem SchurElem::basis(std::shared_ptr<const SchurAlgebra> A, std::size_t idx) {
  if (idx >= A->dimension()) throw Error("SchurElem: basis index out of range");
  SchurElem e(A);
  e.add(idx, RingElem::one(A->ring()));
  return e;
}

RingElem SchurElem::coefficient(std::size_t idx) const {
  auto it = c_.find(idx);
  return it == c_.end() ? RingElem::zero(A_->ring()) : it->second;
}

void SchurElem::add(std::size_t idx, const RingElem& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = c_.emplace(idx, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
}

SchurElem operator*(const SchurElem& a, const SchurElem& b) {
  if (a.A_->n() != b.A_->n() || a.A_->d() != b.A_->d() || a.A_->ring() != b.A_->ring())
    throw Error("SchurElem: product of elements of different algebras");
  SchurElem r(a.A_);
  const BaseRing& R = a.A_->ring();
  for (const auto& [i, ci] : a.c_)
    for (const auto& [j, cj] : b.c_) {
      RingElem cij = ci * cj;
      for (const auto& [g, c] : a.A_->product_terms(i, j)) r.add(g, cij * RingElem(R, c));
    }
  return r;
}

SchurElem operator+(const SchurElem& a, const SchurElem& b) {
  SchurElem r = a;
  for (const auto& [j, c] : b.c_) r.add(j, c);
  return r;
}

std::string SchurElem::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (const auto& [i, c] : c_) {
    if (!s.empty()) s += " + ";
    if (!c.is_one()) s += (c.needs_parens() ? "(" + c.to_string() + ")" : c.to_string()) + "*";
    s += "s" + A_->alpha_to_string(i);
  }
  return s;
}

SchurElem structure_constants(const std::shared_ptr<const SchurAlgebra>& A, std::size_t alpha, std::size_t beta) {
  return SchurElem::basis(A, alpha) * SchurElem::basis(A, beta);
}

SchurElem evaluation_embed(const std::shared_ptr<const SchurAlgebra>& A, const RingMatrix& phi) {
  const std::size_t n = A->n();
  if (phi.size() != n) throw Error("evaluation_embed: matrix must be n x n");
  std::vector<RingElem> flat;
  for (const auto& row : phi) {
    if (row.size() != n) throw Error("evaluation_embed: matrix must be n x n");
    for (const auto& x : row) {
      if (x.ring() != A->ring()) throw RingMismatch("evaluation_embed: entry ring differs from algebra ring");
      flat.push_back(x);
    }
  }
  SchurElem e(A);
  for (std::size_t k = 0; k < A->dimension(); ++k) {
    const Monomial& a = A->basis_index()[k];
    RingElem v = RingElem::one(A->ring());
    for (std::size_t i = 0; i < flat.size() && !v.is_zero(); ++i)
      if (a[i]) v *= flat[i].pow(a[i]);
    e.add(k, v);
  }
  return e;
}

SchurElem identity_element(const std::shared_ptr<const SchurAlgebra>& A) {
  SchurElem e = evaluation_embed(A, ring_identity(A->ring(), A->n()));
  for (std::size_t k = 0; k < A->dimension(); ++k) {
    SchurElem s = SchurElem::basis(A, k);
    if (!(e * s == s) || !(s * e == s))
      throw Error("identity_element: ev_id is not a two-sided unit at s" + A->alpha_to_string(k));
  }
  return e;
}

// ------------------------------------------------------------------- modules

RingMatrix SchurModule::matrix_of(const SchurElem& s) const {
  RingMatrix m(rank, std::vector<RingElem>(rank, RingElem::zero(ring())));
  for (const auto& [a, c] : s.coefficients())
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        if (!action[a][i][j].is_zero()) m[i][j] += c * action[a][i][j];
  return m;
}

std::vector<RingElem> SchurModule::apply(std::size_t alpha, const std::vector<RingElem>& v) const {
  std::vector<RingElem> w(rank, RingElem::zero(ring()));
  const auto& A = action.at(alpha);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < rank; ++j)
      if (!A[i][j].is_zero() && !v[j].is_zero()) w[i] += A[i][j] * v[j];
  return w;
}

SchurModule module_of_functor(const FunctorEval& P, unsigned d) {
  if (P.expr.degree() > d)
    throw Error("module_of_functor: " + P.expr.to_string() + " has degree " + std::to_string(P.expr.degree()) +
                " > " + std::to_string(d));
  if (!P.module.is_free()) throw Error("module_of_functor: P(U) must be free");
  const BaseRing ZZ = BaseRing::integers();
  SchurModule M;
  M.algebra = std::make_shared<const SchurAlgebra>(P.n, d, ZZ);
  M.rank = P.module.ngens;
  M.labels = P.labels;
  M.action.assign(M.algebra->dimension(), RingMatrix(M.rank, std::vector<RingElem>(M.rank, RingElem::zero(ZZ))));
  PolyMatrix law = symbolic_law(P.expr, P.n, P.n);
  for (std::size_t i = 0; i < M.rank; ++i)
    for (std::size_t j = 0; j < M.rank; ++j)
      for (const auto& [m, c] : law.at(i, j).terms()) M.action[M.algebra->index_of(m)][i][j] = c;
  return M;
}

SchurModule base_change_module(const SchurModule& M, std::uint64_t p) {
  if (M.ring().kind() != BaseRing::Kind::Integers) throw Error("base_change_module: module must be over ZZ");
  FractionFieldReduction red(M.ring(), p);
  SchurModule out;
  out.algebra = std::make_shared<const SchurAlgebra>(M.algebra->base_change(red.target()));
  out.rank = M.rank;
  out.labels = M.labels;
  out.action.reserve(M.action.size());
  for (const auto& A : M.action) {
    RingMatrix B(A.size());
    for (std::size_t i = 0; i < A.size(); ++i)
      for (const auto& x : A[i]) B[i].push_back(red(x));
    out.action.push_back(std::move(B));
  }
  return out;
}

std::vector<std::vector<RingElem>> spin(const SchurModule& M, const std::vector<RingElem>& v) {
  if (v.size() != M.rank) throw Error("spin: vector length differs from module rank");
  return with_field(M.ring(), [&](const auto& k) {
    using F = std::decay_t<decltype(k)>;
    using S = typename F::Scalar;
    // Only the nonzero action matrices matter.
    std::vector<std::vector<std::vector<S>>> mats;
    for (const auto& A : M.action) {
      std::vector<std::vector<S>> B(M.rank, std::vector<S>(M.rank, k.zero()));
      bool nz = false;
      for (std::size_t i = 0; i < M.rank; ++i)
        for (std::size_t j = 0; j < M.rank; ++j) {
          B[i][j] = to_scalar(k, A[i][j]);
          nz = nz || !k.is_zero(B[i][j]);
        }
      if (nz) mats.push_back(std::move(B));
    }
    EchelonBasis<F> eb(k, M.rank);
    std::deque<std::vector<S>> queue;
    std::vector<S> v0;
    for (const auto& x : v) v0.push_back(to_scalar(k, x));
    if (eb.insert(v0)) queue.push_back(v0);
    while (!queue.empty()) {
      auto w = std::move(queue.front());
      queue.pop_front();
      for (const auto& B : mats) {
        std::vector<S> u(M.rank, k.zero());
        for (std::size_t i = 0; i < M.rank; ++i)
          for (std::size_t j = 0; j < M.rank; ++j)
            if (!k.is_zero(w[j])) u[i] = k.add(u[i], k.mul(B[i][j], w[j]));
        if (eb.insert(u)) queue.push_back(std::move(u));
      }
    }
    std::vector<std::vector<RingElem>> out;
    for (const auto& row : eb.reduced_basis()) {
      std::vector<RingElem> r;
      for (const auto& x : row) r.push_back(from_scalar(k, x));
      out.push_back(std::move(r));
    }
    return out;
  });
}

IrreducibilityProbe probe_irreducibility(const SchurModule& M, std::size_t samples, std::uint64_t seed) {
  IrreducibilityProbe probe;
  std::mt19937_64 rng(seed);
  const BaseRing& R = M.ring();
  auto consider = [&](const std::vector<RingElem>& v) {
    auto s = spin(M, v);
    ++probe.spins;
    if (s.empty()) return;
    if (s.size() < M.rank) probe.proper_submodule_found = true;
    if (probe.smallest.empty() || s.size() < probe.smallest.size()) probe.smallest = s;
  };
  for (std::size_t i = 0; i < M.rank; ++i) {
    std::vector<RingElem> v(M.rank, RingElem::zero(R));
    v[i] = RingElem::one(R);
    consider(v);
  }
  const long range = R.kind() == BaseRing::Kind::PrimeField ? static_cast<long>(std::min<std::uint64_t>(R.prime(), 1000000)) - 1 : 5;
  std::uniform_int_distribution<long> dist(R.kind() == BaseRing::Kind::PrimeField ? 0 : -range, range);
  for (std::size_t t = 0; t < samples; ++t) {
    std::vector<RingElem> v;
    for (std::size_t i = 0; i < M.rank; ++i) v.push_back(RingElem(R, dist(rng)));
    consider(v);
  }
  return probe;
}

}  // namespace pfcalc
