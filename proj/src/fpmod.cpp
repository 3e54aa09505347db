#include "pfcalc/fpmod.hpp"

namespace pfcalc {

FPModule::FPModule(BaseRing r, std::size_t n, std::vector<std::vector<RingElem>> rels)
    : ring(std::move(r)), ngens(n), relations(std::move(rels)) {
  for (const auto& row : relations) {
    if (row.size() != ngens) throw Error("relation of length " + std::to_string(row.size()) + ", expected " + std::to_string(ngens));
    for (const auto& x : row)
      if (x.ring() != ring) throw RingMismatch("relation entry over " + x.ring().tag() + " in module over " + ring.tag());
  }
}

FPModule FPModule::integral(std::size_t n, const std::vector<std::vector<long>>& rows) {
  auto Z = BaseRing::integers();
  std::vector<std::vector<RingElem>> rels;
  for (const auto& row : rows) {
    std::vector<RingElem> r;
    for (long x : row) r.emplace_back(Z, x);
    rels.push_back(std::move(r));
  }
  return FPModule(Z, n, std::move(rels));
}

IntMatrix FPModule::integer_relations() const {
  if (ring.kind() != BaseRing::Kind::Integers) throw Error("integer presentation requested for a module over " + ring.tag());
  IntMatrix m;
  for (const auto& row : relations) {
    std::vector<mpz_class> r;
    for (const auto& x : row) r.push_back(x.as_integer());
    m.push_back(std::move(r));
  }
  return m;
}

FPModule FPModule::direct_sum(const FPModule& other) const {
  if (ring != other.ring) throw RingMismatch("direct sum of modules over different rings");
  std::vector<std::vector<RingElem>> rels;
  auto zero = RingElem::zero(ring);
  for (const auto& row : relations) {
    auto r = row;
    r.resize(ngens + other.ngens, zero);
    rels.push_back(std::move(r));
  }
  for (const auto& row : other.relations) {
    std::vector<RingElem> r(ngens, zero);
    r.insert(r.end(), row.begin(), row.end());
    rels.push_back(std::move(r));
  }
  return FPModule(ring, ngens + other.ngens, std::move(rels));
}

namespace {
void check_prime(std::uint64_t p) {
  if (p != 0 && !is_prime(p)) throw Error(std::to_string(p) + " is not prime");
}
}  // namespace

std::size_t fiber_dimension(const FPModule& M, std::uint64_t p) {
  check_prime(p);
  return M.ngens - rank_over(M.integer_relations(), p);
}

std::size_t fiber_dimension_from_smith(const FPModule& M, std::uint64_t p) {
  check_prime(p);
  std::size_t units = 0;
  for (const auto& d : smith_invariants(M.integer_relations()))
    if (p == 0 || mpz_divisible_ui_p(d.get_mpz_t(), p) == 0) ++units;
  return M.ngens - units;
}

std::size_t submodule_fiber_dimension(const FPModule& M, const std::vector<std::vector<mpz_class>>& N,
                                      std::uint64_t p) {
  IntMatrix rel = M.integer_relations();
  IntMatrix both = rel;
  both.insert(both.end(), N.begin(), N.end());
  for (const auto& row : both)
    if (row.size() != M.ngens) throw Error("submodule generator of wrong length");
  return rank_over(both, p) - rank_over(rel, p);
}

FreenessCertificate generic_freeness(const FPModule& M, const std::vector<std::vector<mpz_class>>& N) {
  const std::size_t n = M.ngens;
  IntMatrix rel = M.integer_relations();
  RationalField Q;
  FreenessCertificate cert;
  cert.r = 1;

  // Candidates: N generators, then the standard generators of M.
  std::vector<std::vector<mpz_class>> cand = N;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<mpz_class> e(n, 0);
    e[j] = 1;
    cand.push_back(std::move(e));
  }

  auto to_q = [&](const std::vector<mpz_class>& v) {
    std::vector<mpq_class> q;
    for (const auto& x : v) q.emplace_back(x);
    return q;
  };
  auto absorb_pivot = [&](const std::vector<mpq_class>& residue) {
    for (const auto& x : residue)
      if (sgn(x) != 0) {
        cert.r *= abs(x.get_num());
        cert.r *= x.get_den();
        return;
      }
  };

  EchelonBasis<RationalField> span(Q, n);
  for (const auto& o : rel) {
    auto res = span.reduce(to_q(o));
    if (span.insert(to_q(o))) absorb_pivot(res);
  }
  std::vector<std::size_t> rejected;
  for (std::size_t c = 0; c < cand.size(); ++c) {
    auto res = span.reduce(to_q(cand[c]));
    if (span.insert(to_q(cand[c]))) {
      absorb_pivot(res);
      cert.basis_vectors.push_back(cand[c]);
      cert.basis_indices.push_back(c);
      if (c < N.size()) cert.k = cert.basis_vectors.size();
    } else {
      rejected.push_back(c);
    }
  }

  // Write every rejected candidate as sum c_i v_i + sum l_k o_k and clear
  // the denominators of one particular solution.
  const std::size_t m = cert.basis_vectors.size();
  const std::size_t cols = m + rel.size();
  for (std::size_t c : rejected) {
    DenseMatrix<RationalField> a(Q, n, cols + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) a(i, j) = cert.basis_vectors[j][i];
      for (std::size_t k = 0; k < rel.size(); ++k) a(i, m + k) = rel[k][i];
      a(i, cols) = cand[c][i];
    }
    auto piv = rref(a);
    if (!piv.empty() && piv.back() == cols) throw Error("generic_freeness: inconsistent expression (internal)");
    for (std::size_t row = 0; row < piv.size(); ++row) {
      const mpq_class& x = a(row, cols);
      if (sgn(x) != 0) cert.r *= x.get_den();
    }
  }
  cert.r = abs(cert.r);
  if (cert.r == 0) cert.r = 1;
  return cert;
}

SemicontinuityReport semicontinuity_report(const FPModule& M, const std::vector<std::uint64_t>& primes) {
  SemicontinuityReport rep;
  rep.generic = fiber_dimension(M, 0);
  rep.dims[0] = rep.generic;
  for (auto p : primes) {
    auto d = fiber_dimension(M, p);
    rep.dims[p] = d;
    if (d < rep.generic) rep.holds = false;
  }
  return rep;
}

}  // namespace pfcalc
