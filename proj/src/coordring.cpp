#include "pfcalc/coordring.hpp"

#include <map>

namespace pfcalc {

VarSet coordinate_vars(std::size_t n, const std::string& stem) {
  if (n == 1) return VarSet({stem});
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(stem + std::to_string(i));
  return VarSet(names);
}

PolyLawRep PolyLawRep::identity(const FPModule& M) {
  PolyLawRep id{M, coordinate_vars(M.ngens), {}};
  for (std::size_t i = 0; i < M.ngens; ++i) id.body.push_back(MultiPoly::variable(M.ring, id.vars, i));
  return id;
}

namespace {

std::size_t ext_degree(const BaseRing& R) {
  return R.kind() == BaseRing::Kind::Quotient ? R.extension_degree() : 1;
}

/// The substitution x -> x + sum_{k,j} a_kj b_j u_k over the variables x
/// followed by the parameters a_kj.
struct Translation {
  BaseRing ring;
  std::size_t nx = 0;
  VarSet all;
  std::vector<MultiPoly> images;
  std::vector<MultiPoly> plain;  // x_i embedded in `all`
  std::uint64_t reduce_p = 0;

  Translation(const FPModule& M, const VarSet& xvars) : ring(M.ring), nx(xvars.size()) {
    if (M.ngens != nx) throw Error("variable count does not match the module's generators");
    const std::size_t e = ext_degree(ring);
    std::vector<std::string> params;
    for (std::size_t k = 0; k < M.relations.size(); ++k)
      for (std::size_t j = 0; j < e; ++j) params.push_back("_a" + std::to_string(k) + "_" + std::to_string(j));
    all = xvars + VarSet(params);
    std::vector<RingElem> b;
    for (std::size_t j = 0; j < e; ++j)
      b.push_back(ring.kind() == BaseRing::Kind::Quotient ? RingElem::generator(ring).pow(j) : RingElem::one(ring));
    for (std::size_t i = 0; i < nx; ++i) {
      MultiPoly y = MultiPoly::variable(ring, all, i);
      plain.push_back(y);
      for (std::size_t k = 0; k < M.relations.size(); ++k)
        for (std::size_t j = 0; j < e; ++j) {
          RingElem c = b[j] * M.relations[k][i];
          if (c.is_zero()) continue;
          y += MultiPoly::variable(ring, all, nx + k * e + j).scaled(c);
        }
      images.push_back(std::move(y));
    }
    // Over F_p-based rings the parameters only take values in F_p.
    if (ring.characteristic() != 0) reduce_p = ring.characteristic();
  }

  MultiPoly reduce(const MultiPoly& f) const {
    if (reduce_p == 0) return f;
    MultiPoly out(f.ring(), f.vars());
    for (const auto& [m, c] : f.terms()) {
      Monomial r = m;
      for (std::size_t v = nx; v < m.size(); ++v)
        if (m[v] >= reduce_p) r.set(v, (m[v] - 1) % (reduce_p - 1) + 1);
      out.add_term(r, c);
    }
    return out;
  }

  /// f(x + u) - f(x) for f given over the x variables.
  MultiPoly difference(const MultiPoly& f) const {
    std::vector<std::size_t> pos(nx);
    for (std::size_t i = 0; i < nx; ++i) pos[i] = i;
    return reduce(f.substitute(images) - f.embed(all, pos));
  }
};

/// Solution of the translation system on the given unknown monomials, as
/// coordinate vectors over the coefficient field (integers over ZZ).
std::vector<std::vector<mpq_class>> solve_system(const FPModule& M, const VarSet& xvars,
                                                  const std::vector<Monomial>& support) {
  const BaseRing& R = M.ring;
  const std::size_t e = ext_degree(R);
  const std::size_t ncols = support.size() * e;
  Translation tr(M, xvars);
  std::vector<RingElem> b;
  for (std::size_t j = 0; j < e; ++j)
    b.push_back(R.kind() == BaseRing::Kind::Quotient ? RingElem::generator(R).pow(j) : RingElem::one(R));

  // rows keyed by (monomial in x and a, coordinate)
  std::map<std::pair<Monomial, std::size_t>, std::vector<mpq_class>> rows;
  for (std::size_t s = 0; s < support.size(); ++s) {
    MultiPoly diff = tr.difference(MultiPoly::term(R, xvars, RingElem::one(R), support[s]));
    for (const auto& [mu, r] : diff.terms()) {
      for (std::size_t j = 0; j < e; ++j) {
        auto coords = (b[j] * r).coordinates();
        for (std::size_t l = 0; l < coords.size(); ++l) {
          if (sgn(coords[l]) == 0) continue;
          auto& row = rows[{mu, l}];
          if (row.empty()) row.assign(ncols, 0);
          row[s * e + j] += coords[l];
        }
      }
    }
  }

  std::vector<std::vector<mpq_class>> out;
  if (R.kind() == BaseRing::Kind::Integers) {
    IntMatrix a;
    for (auto& [key, row] : rows) {
      std::vector<mpz_class> r;
      for (auto& x : row) r.push_back(x.get_num());
      a.push_back(std::move(r));
    }
    for (auto& v : integer_kernel(a, ncols)) {
      std::vector<mpq_class> q;
      for (auto& x : v) q.emplace_back(x);
      out.push_back(std::move(q));
    }
    return out;
  }
  return with_field(R.coefficient_field(), [&](auto k) {
    using F = decltype(k);
    DenseMatrix<F> a(k, 0, ncols);
    for (auto& [key, row] : rows) {
      std::vector<typename F::Scalar> r;
      for (auto& x : row) r.push_back(k.from_rational(x));
      a.append_row(r);
    }
    std::vector<std::vector<mpq_class>> sol;
    for (auto& v : nullspace(a)) {
      std::vector<mpq_class> q;
      for (auto& x : v) q.push_back(k.to_rational(x));
      sol.push_back(std::move(q));
    }
    return sol;
  });
}

RingElem element_from(const BaseRing& R, const std::vector<mpq_class>& v, std::size_t offset, std::size_t e) {
  if (R.kind() == BaseRing::Kind::Quotient)
    return RingElem::from_coordinates(R, std::vector<mpq_class>(v.begin() + offset, v.begin() + offset + e));
  return RingElem(R, v[offset]);
}

MultiPoly poly_from(const BaseRing& R, const VarSet& vars, const std::vector<Monomial>& support,
                    const std::vector<mpq_class>& v) {
  const std::size_t e = ext_degree(R);
  MultiPoly f(R, vars);
  for (std::size_t s = 0; s < support.size(); ++s) f.add_term(support[s], element_from(R, v, s * e, e));
  return f;
}

GradedPieceBasis make_piece(const FPModule& M, unsigned d, const VarSet& vars, const std::vector<Monomial>& support) {
  GradedPieceBasis out{M, d, vars, {}};
  for (const auto& v : solve_system(M, vars, support)) out.basis.push_back(poly_from(M.ring, vars, support, v));
  return out;
}

/// Matrix of multiplication by t on the span of `basis` (coordinate vectors).
template <class F>
DenseMatrix<F> t_action(const F& k, const BaseRing& R, const std::vector<std::vector<mpq_class>>& basis) {
  const std::size_t e = R.extension_degree();
  const std::size_t dim = basis.size();
  const std::size_t len = basis.empty() ? 0 : basis[0].size();
  DenseMatrix<F> T(k, dim, dim);
  RingElem t = RingElem::generator(R);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<mpq_class> w(len);
    for (std::size_t s = 0; s < len / e; ++s) {
      auto coords = (element_from(R, basis[c], s * e, e) * t).coordinates();
      for (std::size_t l = 0; l < e; ++l) w[s * e + l] = coords[l];
    }
    // Solve w = sum_j T(j, c) basis[j].
    DenseMatrix<F> a(k, len, dim + 1);
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = k.from_rational(basis[j][i]);
      a(i, dim) = k.from_rational(w[i]);
    }
    auto piv = rref(a);
    if (!piv.empty() && piv.back() == dim) throw Error("graded piece is not closed under t (internal)");
    for (std::size_t r = 0; r < piv.size(); ++r) T(piv[r], c) = a(r, dim);
  }
  return T;
}

}  // namespace

GradedPieceBasis graded_piece(const FPModule& M, unsigned d) {
  VarSet vars = coordinate_vars(M.ngens);
  return make_piece(M, d, vars, monomials_of_degree(M.ngens, d));
}

GradedPieceBasis bigraded_piece(const FPModule& M, const FPModule& N, unsigned d, unsigned e) {
  FPModule S = M.direct_sum(N);
  std::vector<std::string> names;
  VarSet xs = coordinate_vars(M.ngens, "x"), ys = coordinate_vars(N.ngens, "y");
  VarSet vars = xs + ys;
  std::vector<Monomial> support;
  for (const auto& a : monomials_of_degree(M.ngens, d))
    for (const auto& b : monomials_of_degree(N.ngens, e)) {
      Monomial m(vars.size());
      for (std::size_t i = 0; i < M.ngens; ++i) m.set(i, a[i]);
      for (std::size_t i = 0; i < N.ngens; ++i) m.set(M.ngens + i, b[i]);
      support.push_back(m);
    }
  return make_piece(S, d + e, vars, support);
}

bool is_translation_invariant(const FPModule& M, const MultiPoly& f) {
  return Translation(M, f.vars()).difference(f).is_zero();
}

std::map<long, PolyLawRep> homogeneous_components(const PolyLawRep& phi) {
  std::map<long, PolyLawRep> out;
  const auto& w = phi.vars.weights();
  for (std::size_t i = 0; i < phi.body.size(); ++i)
    for (const auto& [m, c] : phi.body[i].terms()) {
      long d = m.weighted_degree(w);
      auto it = out.find(d);
      if (it == out.end()) {
        PolyLawRep part{phi.source, phi.vars, std::vector<MultiPoly>(phi.body.size(), MultiPoly(phi.source.ring, phi.vars))};
        it = out.emplace(d, std::move(part)).first;
      }
      it->second.body[i].add_term(m, c);
    }
  return out;
}

std::map<std::pair<unsigned, unsigned>, PolyLawRep> bihomogeneous_components(const PolyLawRep& phi,
                                                                              std::size_t split) {
  if (split > phi.vars.size()) throw Error("split point beyond the variable list");
  std::map<std::pair<unsigned, unsigned>, PolyLawRep> out;
  const auto& w = phi.vars.weights();
  for (std::size_t i = 0; i < phi.body.size(); ++i)
    for (const auto& [m, c] : phi.body[i].terms()) {
      unsigned a = 0, b = 0;
      for (std::size_t v = 0; v < m.size(); ++v) (v < split ? a : b) += w[v] * m[v];
      auto it = out.find({a, b});
      if (it == out.end()) {
        PolyLawRep part{phi.source, phi.vars, std::vector<MultiPoly>(phi.body.size(), MultiPoly(phi.source.ring, phi.vars))};
        it = out.emplace(std::make_pair(a, b), std::move(part)).first;
      }
      it->second.body[i].add_term(m, c);
    }
  return out;
}

ProductCheck product_ring_check(const FPModule& M, const FPModule& N, unsigned d, unsigned e) {
  if (M.ring != N.ring) throw RingMismatch("product check over different rings");
  const BaseRing& R = M.ring;
  ProductCheck pc;
  auto sm = solve_system(M, coordinate_vars(M.ngens), monomials_of_degree(M.ngens, d));
  auto sn = solve_system(N, coordinate_vars(N.ngens), monomials_of_degree(N.ngens, e));
  pc.dim_m = sm.size();
  pc.dim_n = sn.size();
  pc.direct = bigraded_piece(M, N, d, e).dimension();
  if (R.kind() != BaseRing::Kind::Quotient || pc.dim_m == 0 || pc.dim_n == 0) {
    pc.tensor = pc.dim_m * pc.dim_n;
    return pc;
  }
  // A (x)_R B = (A (x)_k B) / (t (x) 1 - 1 (x) t)
  pc.tensor = with_field(R.coefficient_field(), [&](auto k) {
    using F = decltype(k);
    DenseMatrix<F> ta = t_action(k, R, sm), tb = t_action(k, R, sn);
    const std::size_t a = pc.dim_m, b = pc.dim_n;
    DenseMatrix<F> rel(k, a * b, a * b);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j)
        for (std::size_t i2 = 0; i2 < a; ++i2)
          for (std::size_t j2 = 0; j2 < b; ++j2) {
            auto v = k.zero();
            if (j == j2) v = k.add(v, ta(i, i2));
            if (i == i2) v = k.sub(v, tb(j, j2));
            rel(i * b + j, i2 * b + j2) = v;
          }
    return a * b - rank(rel);
  });
  return pc;
}

PolyLawRep compose_laws(const PolyLawRep& gamma, const PolyLawRep& phi) {
  if (gamma.vars.size() != phi.body.size()) {
    throw Error("compose_laws: inner law has " + std::to_string(phi.body.size()) + " outputs, outer law expects " +
                std::to_string(gamma.vars.size()));
  }
  if (gamma.source.ring != phi.source.ring) throw RingMismatch("compose_laws over different rings");
  PolyLawRep out{phi.source, phi.vars, {}};
  for (const auto& g : gamma.body) out.body.push_back(g.substitute(phi.body));
  return out;
}

}  // namespace pfcalc
