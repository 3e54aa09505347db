#include "pfcalc/geometry.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <random>

namespace pfcalc {

namespace {

const BaseRing& ZZ() {
  static const BaseRing r = BaseRing::integers();
  return r;
}

std::string coord_name(const std::string& stem, const Monomial& m, unsigned d) {
  const std::size_t n = m.size();
  if (d == 1) {
    std::size_t i = 0;
    while (m[i] == 0) ++i;
    bool digit = !stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()));
    return stem + (digit ? "_" : "") + std::to_string(i + 1);
  }
  bool small = d < 10;
  std::string s = stem + "_";
  for (std::size_t i = 0; i < n; ++i) s += (small || i == 0 ? "" : "_") + std::to_string(m[i]);
  return s;
}

GroebnerBasis run_gb(const GeometryOptions& opts, const std::vector<MultiPoly>& F, MonomialOrder order) {
  GroebnerOptions go;
  go.max_basis = opts.max_basis;
  return opts.groebner ? opts.groebner(F, order, go) : buchberger(F, order, go);
}

MultiPoly to_field(const MultiPoly& f, const BaseRing& field) {
  if (f.ring() == field) return f;
  if (f.ring().kind() == BaseRing::Kind::Integers) {
    if (field.kind() == BaseRing::Kind::Rationals)
      return f.map_coefficients(field, [&](const RingElem& c) { return RingElem(field, mpq_class(c.as_integer())); });
    if (field.kind() == BaseRing::Kind::PrimeField) {
      FractionFieldReduction red(ZZ(), field.prime());
      return f.map_coefficients(field, [&](const RingElem& c) { return red(c); });
    }
  }
  throw RingMismatch("cannot map polynomial over " + f.ring().tag() + " into " + field.tag());
}

Monomial unit_mono(std::size_t n, std::size_t i, unsigned e = 1) {
  Monomial m(n);
  m.set(i, e);
  return m;
}

BaseRing field_for(std::uint64_t p) { return p == 0 ? BaseRing::rationals() : BaseRing::prime_field(p); }

std::vector<std::uint64_t> with_generic(const std::vector<std::uint64_t>& primes) {
  std::vector<std::uint64_t> ps{0};
  for (auto p : primes) {
    if (p == 0) continue;
    if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
    ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; results in order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, unsigned threads, Fn fn) {
  std::vector<T> out(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  for (std::size_t start = 0; start < count; start += threads) {
    std::vector<std::future<T>> batch;
    for (std::size_t i = start; i < std::min(count, start + threads); ++i)
      batch.push_back(std::async(std::launch::async, fn, i));
    for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------- transformations

PolyTransformation::PolyTransformation(std::vector<SourceComponent> source, const std::string& rule)
    : source_(std::move(source)) {
  if (source_.empty()) throw Error("transformation: no source components");
  std::vector<std::string> names;
  for (const auto& c : source_) {
    if (c.degree == 0) throw Error("transformation: component '" + c.name + "' has degree 0");
    names.push_back(c.name);
  }
  VarSet V(names);
  rule_ = parse_poly(rule, ZZ(), V);
  if (rule_.is_zero()) throw Error("transformation: rule is zero");
  bool first = true;
  for (const auto& [m, c] : rule_.terms()) {
    unsigned D = 0;
    for (std::size_t k = 0; k < source_.size(); ++k) D += m[k] * source_[k].degree;
    if (first) target_degree_ = D;
    else if (D != target_degree_) throw Error("transformation: rule '" + rule + "' is not homogeneous");
    first = false;
  }
  if (target_degree_ == 0) throw Error("transformation: rule is constant");
}

FunctorExpr PolyTransformation::source_functor() const {
  std::vector<FunctorExpr> parts;
  for (const auto& c : source_) parts.push_back(c.degree == 1 ? FunctorExpr::id() : FunctorExpr::sym(c.degree));
  return parts.size() == 1 ? parts[0] : FunctorExpr::direct_sum(parts);
}

FunctorExpr PolyTransformation::target_functor() const {
  return target_degree_ == 1 ? FunctorExpr::id() : FunctorExpr::sym(target_degree_);
}

VarSet PolyTransformation::source_vars(std::size_t n) const {
  std::vector<std::string> names;
  std::vector<unsigned> weights;
  for (const auto& c : source_)
    for (const auto& m : monomials_of_degree(n, c.degree)) {
      names.push_back(coord_name(c.name, m, c.degree));
      weights.push_back(c.degree);
    }
  return VarSet(names, weights);
}

VarSet PolyTransformation::target_vars(std::size_t n) const {
  std::vector<std::string> names;
  for (const auto& m : monomials_of_degree(n, target_degree_)) names.push_back(coord_name("y", m, target_degree_));
  return VarSet(names, std::vector<unsigned>(names.size(), target_degree_));
}

std::vector<MultiPoly> PolyTransformation::expand(std::size_t n) const {
  VarSet S = source_vars(n);
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back("#x" + std::to_string(i + 1));
  VarSet W = VarSet(xs) + S;
  // Component k as sum_beta c_{k,beta} x^beta.
  std::vector<MultiPoly> images;
  std::size_t pos = 0;
  for (const auto& c : source_) {
    MultiPoly e(ZZ(), W);
    for (const auto& m : monomials_of_degree(n, c.degree)) {
      Monomial t(W.size());
      for (std::size_t i = 0; i < n; ++i) t.set(i, m[i]);
      t.set(n + pos, 1);
      e.add_term(t, RingElem::one(ZZ()));
      ++pos;
    }
    images.push_back(e);
  }
  MultiPoly full = rule_.substitute(images);
  auto targets = monomials_of_degree(n, target_degree_);
  std::map<Monomial, std::size_t> tindex;
  for (std::size_t i = 0; i < targets.size(); ++i) tindex[targets[i]] = i;
  std::vector<MultiPoly> out(targets.size(), MultiPoly(ZZ(), S));
  for (const auto& [m, c] : full.terms()) {
    Monomial g(n), rest(S.size());
    for (std::size_t i = 0; i < n; ++i) g.set(i, m[i]);
    for (std::size_t i = 0; i < S.size(); ++i) rest.set(i, m[n + i]);
    out[tindex.at(g)].add_term(rest, c);
  }
  return out;
}

VarSet functor_coordinates(const FunctorExpr& P, std::size_t n, const std::string& stem) {
  const std::size_t N = evaluate(P, n).module.ngens;
  std::vector<unsigned> weights(N, 1);
  // Standard grading: a coordinate dual to a basis vector in the degree-i
  // part gets weight i (degree 0 is clamped to 1).
  for (const auto& [deg, basis] : homogeneous_parts(P, n))
    for (const auto& v : basis) {
      std::size_t nz = 0, at = 0;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) {
          ++nz;
          at = i;
        }
      if (nz == 1) weights[at] = std::max(1u, deg);
    }
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= N; ++i) names.push_back(stem + std::to_string(i));
  return VarSet(names, weights);
}

bool transformation_equivariant_on_samples(const PolyTransformation& a, std::size_t n, std::size_t samples,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> d(-3, 3);
  auto alpha = a.expand(n);
  const std::size_t ns = a.source_vars(n).size();
  auto eval = [&](const std::vector<mpz_class>& c) {
    std::vector<RingElem> pt;
    for (const auto& x : c) pt.push_back(RingElem(ZZ(), x));
    std::vector<mpz_class> out;
    for (const auto& f : alpha) out.push_back(f.evaluate(pt).as_integer());
    return out;
  };
  auto apply = [](const IntMatrix& M, const std::vector<mpz_class>& v) {
    std::vector<mpz_class> w(M.size(), 0);
    for (std::size_t i = 0; i < M.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) w[i] += M[i][j] * v[j];
    return w;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<std::vector<long>> phi(n, std::vector<long>(n));
    for (auto& row : phi)
      for (auto& x : row) x = d(rng);
    std::vector<mpz_class> c(ns);
    for (auto& x : c) x = d(rng);
    auto Q = apply_law(a.source_functor(), PolyMatrix::from_integers(phi, n)).to_integers();
    auto P = apply_law(a.target_functor(), PolyMatrix::from_integers(phi, n)).to_integers();
    if (eval(apply(Q, c)) != apply(P, eval(c))) return false;
  }
  return true;
}

// ----------------------------------------------------------- closed subsets

ClosedSubsetAtRank closed_subset(const FunctorExpr& P, std::size_t n, const BaseRing& field, const VarSet& vars,
                                 const std::vector<MultiPoly>& generators, const GeometryOptions& opts) {
  if (!field.is_field() || field.kind() == BaseRing::Kind::Quotient)
    throw Error("closed_subset: field must be QQ or F_p, got " + field.tag());
  ClosedSubsetAtRank X;
  X.functor = P;
  X.n = n;
  X.field = field;
  X.vars = vars;
  for (const auto& g : generators) {
    if (g.vars() != vars) throw Error("closed_subset: generator over different variables");
    X.generators.push_back(to_field(g, field));
  }
  std::vector<MultiPoly> nz;
  for (const auto& g : X.generators)
    if (!g.is_zero()) nz.push_back(g);
  if (nz.empty()) {
    X.gb = GroebnerBasis{field, vars, MonomialOrder::grevlex(), {}, {}};
  } else {
    X.gb = run_gb(opts, nz, MonomialOrder::grevlex());
  }
  return X;
}

ClosedSubsetAtRank image_closure(const PolyTransformation& a, std::size_t n, const BaseRing& field,
                                 const GeometryOptions& opts) {
  if (a.target_degree() > opts.max_degree)
    throw SizeGuardExceeded("image_closure: target degree " + std::to_string(a.target_degree()) +
                            " exceeds max degree " + std::to_string(opts.max_degree));
  VarSet S = a.source_vars(n), T = a.target_vars(n);
  if (S.size() + T.size() > opts.max_vars)
    throw SizeGuardExceeded("image_closure: " + std::to_string(S.size()) + " source + " + std::to_string(T.size()) +
                            " target variables exceed max " + std::to_string(opts.max_vars));
  VarSet W = S + T;
  std::vector<std::size_t> spos(S.size()), tpos(T.size());
  for (std::size_t i = 0; i < S.size(); ++i) spos[i] = i;
  for (std::size_t i = 0; i < T.size(); ++i) tpos[i] = S.size() + i;
  auto alpha = a.expand(n);
  std::vector<MultiPoly> graph;
  for (std::size_t i = 0; i < T.size(); ++i) {
    MultiPoly y = MultiPoly::variable(ZZ(), W, S.size() + i);
    graph.push_back(to_field(y - alpha[i].embed(W, spos), field));
  }
  GroebnerBasis gb = run_gb(opts, graph, MonomialOrder::elimination(S.size()));
  std::vector<MultiPoly> gens;
  for (std::size_t i = 0; i < gb.generators.size(); ++i) {
    const Monomial& lm = gb.leading_monomials[i];
    bool free = true;
    for (std::size_t v = 0; v < S.size(); ++v)
      if (lm[v]) free = false;
    if (!free) continue;
    MultiPoly g(field, T);
    for (const auto& [m, c] : gb.generators[i].terms()) {
      Monomial t(T.size());
      for (std::size_t v = 0; v < T.size(); ++v) t.set(v, m[S.size() + v]);
      g.add_term(t, c);
    }
    gens.push_back(g);
  }
  return closed_subset(a.target_functor(), n, field, T, gens, opts);
}

std::vector<PrimeDimension> dimension_per_prime(const PolyTransformation& a, std::size_t n,
                                                const std::vector<std::uint64_t>& primes,
                                                const GeometryOptions& opts) {
  auto ps = with_generic(primes);
  return parallel_map<PrimeDimension>(ps.size(), opts.threads, [&](std::size_t i) {
    auto t0 = std::chrono::steady_clock::now();
    auto X = image_closure(a, n, field_for(ps[i]), opts);
    auto t1 = std::chrono::steady_clock::now();
    PrimeDimension d;
    d.prime = ps[i];
    d.dimension = X.dimension();
    d.basis_size = X.gb.generators.size();
    d.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return d;
  });
}

// ----------------------------------------------------------- specialization

std::vector<std::uint64_t> SpecializationReport::bad_primes() const {
  std::vector<std::uint64_t> out;
  for (const auto& v : verdicts)
    if (!v.good) out.push_back(v.prime);
  return out;
}

namespace {

// Scales a polynomial over QQ to a primitive one over ZZ.
MultiPoly clear_to_integers(const MultiPoly& f) {
  mpz_class den = 1, g = 0;
  for (const auto& [m, c] : f.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.as_rational().get_den_mpz_t());
  for (const auto& [m, c] : f.terms()) {
    mpq_class s = c.as_rational() * den;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.get_num_mpz_t());
  }
  MultiPoly out(ZZ(), f.vars());
  for (const auto& [m, c] : f.terms()) {
    mpq_class s = c.as_rational() * den;
    out.add_term(m, RingElem(ZZ(), mpz_class(s.get_num() / g)));
  }
  return out;
}

}  // namespace

SpecializationReport good_primes(const std::vector<MultiPoly>& ideal, const std::vector<std::uint64_t>& primes,
                                 MonomialOrder order, const GeometryOptions& opts) {
  if (ideal.empty()) throw Error("good_primes: empty generator list");
  for (const auto& f : ideal)
    if (f.ring().kind() != BaseRing::Kind::Integers) throw Error("good_primes: generators must have integer coefficients");
  const BaseRing QQ = BaseRing::rationals();
  std::vector<MultiPoly> FQ;
  for (const auto& f : ideal) FQ.push_back(to_field(f, QQ));
  GroebnerOptions go;
  go.max_basis = opts.max_basis;
  TracedBasis tr = buchberger_traced(FQ, order, go);

  SpecializationReport rep;
  rep.generic = tr.basis;
  rep.generic_dimension = tr.basis.generators.empty() ? static_cast<long>(ideal[0].nvars()) : ideal_dimension(tr.basis);
  rep.r = 1;
  MonomialComparator cmp(ideal[0].vars(), order);
  for (const auto& g : tr.basis.generators) {
    MultiPoly ig = clear_to_integers(g);
    rep.r *= abs(ig.leading_coefficient(cmp).as_integer());
    rep.integer_basis.push_back(ig);
  }
  mpz_class den = 1;
  for (const auto& row : tr.cofactors)
    for (const auto& c : row)
      for (const auto& [m, a] : c.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.as_rational().get_den_mpz_t());
  rep.r *= den;

  for (auto p : with_generic(primes)) {
    if (p == 0) continue;
    PrimeVerdict v;
    v.prime = p;
    const BaseRing Fp = BaseRing::prime_field(p);
    if (mpz_divisible_ui_p(rep.r.get_mpz_t(), static_cast<unsigned long>(p)) == 0) {
      std::vector<MultiPoly> Gp;
      for (const auto& g : rep.integer_basis) {
        MultiPoly gp = to_field(g, Fp);
        Gp.push_back(gp.scaled(gp.leading_coefficient(cmp).inverse()));
      }
      if (Gp.empty() || satisfies_buchberger_criterion(Gp, order)) {
        v.good = true;
        v.basis = Gp;
        v.leading_monomials = tr.basis.leading_monomials;
        v.dimension = rep.generic_dimension;
        rep.verdicts.push_back(v);
        continue;
      }
    }
    std::vector<MultiPoly> Fp_gens;
    for (const auto& f : ideal) {
      auto g = to_field(f, Fp);
      if (!g.is_zero()) Fp_gens.push_back(g);
    }
    if (Fp_gens.empty()) {
      v.dimension = static_cast<long>(ideal[0].nvars());
    } else {
      auto gb = run_gb(opts, Fp_gens, order);
      v.basis = gb.generators;
      v.leading_monomials = gb.leading_monomials;
      v.dimension = ideal_dimension(gb);
    }
    rep.verdicts.push_back(v);
  }
  return rep;
}

VanishingReport vanishing_transfer(const MultiPoly& f, const std::vector<MultiPoly>& ideal,
                                   const std::vector<std::uint64_t>& primes, const GeometryOptions& opts) {
  if (ideal.empty()) throw Error("vanishing_transfer: empty generator list");
  GroebnerOptions go;
  go.max_basis = opts.max_basis;
  const BaseRing QQ = BaseRing::rationals();
  auto member = [&](const BaseRing& K) {
    std::vector<MultiPoly> G;
    for (const auto& g : ideal) {
      auto h = to_field(g, K);
      if (!h.is_zero()) G.push_back(h);
    }
    auto fk = to_field(f, K);
    if (G.empty()) return fk.is_zero();
    return radical_membership(fk, G, go);
  };
  VanishingReport rep;
  rep.generic = member(QQ);

  std::vector<bool> good;
  auto ps = with_generic(primes);
  if (rep.generic) {
    // Radical witness: 1 in <I, 1 - z f>.
    VarSet W = ideal[0].vars() + VarSet({"z#"});
    std::vector<std::size_t> pos(ideal[0].nvars());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
    std::vector<MultiPoly> J;
    for (const auto& g : ideal) J.push_back(g.embed(W, pos));
    J.push_back(MultiPoly::constant(ZZ(), W, RingElem::one(ZZ())) -
                MultiPoly::variable(ZZ(), W, W.size() - 1) * f.embed(W, pos));
    auto sr = good_primes(J, primes, MonomialOrder::grevlex(), opts);
    for (const auto& v : sr.verdicts) good.push_back(v.good);
  }
  std::size_t k = 0;
  for (auto p : ps) {
    if (p == 0) continue;
    TransferEntry e;
    e.prime = p;
    e.vanishes = member(BaseRing::prime_field(p));
    if (rep.generic && good[k]) {
      e.inferred_from_generic = true;
      if (!e.vanishes)
        throw ConsistencyError("vanishing_transfer: good prime " + std::to_string(p) + " lost radical membership");
    }
    ++k;
    rep.entries.push_back(e);
  }
  return rep;
}

// ---------------------------------------------------------------- equivariance

std::vector<std::vector<std::vector<long>>> default_equivariance_generators(std::size_t n, std::uint64_t characteristic,
                                                                            bool* scaling_skipped) {
  using M = std::vector<std::vector<long>>;
  auto id = [&] {
    M m(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
  };
  std::vector<M> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      M m = id();
      m[i][i] = m[j][j] = 0;
      m[i][j] = m[j][i] = 1;
      out.push_back(m);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        M m = id();
        m[j][i] = 1;  // e_i -> e_i + e_j
        out.push_back(m);
      }
  const bool skip = characteristic == 2;
  if (scaling_skipped) *scaling_skipped = skip;
  if (!skip)
    for (std::size_t i = 0; i < n; ++i) {
      M m = id();
      m[i][i] = 2;
      out.push_back(m);
    }
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << n); ++mask) {
    M m(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = (mask >> i) & 1;
    out.push_back(m);
  }
  return out;
}

EquivarianceReport equivariance_check(const ClosedSubsetAtRank& X,
                                      const std::vector<std::vector<std::vector<long>>>& generators,
                                      const GeometryOptions& opts) {
  EquivarianceReport rep;
  GroebnerOptions go;
  go.max_basis = opts.max_basis;
  std::vector<MultiPoly> I;
  for (const auto& g : X.generators)
    if (!g.is_zero()) I.push_back(g);
  for (const auto& g : generators) {
    ++rep.generators_checked;
    IntMatrix Pg = apply_law(X.functor, PolyMatrix::from_integers(g, X.n)).to_integers();
    std::vector<MultiPoly> images;
    for (std::size_t i = 0; i < Pg.size(); ++i) {
      MultiPoly y(ZZ(), X.vars);
      for (std::size_t j = 0; j < Pg[i].size(); ++j)
        if (sgn(Pg[i][j]) != 0) y.add_term(unit_mono(X.vars.size(), j), RingElem(ZZ(), Pg[i][j]));
      images.push_back(to_field(y, X.field));
    }
    bool ok = true;
    for (const auto& f : I) {
      MultiPoly fg = f.substitute(images);
      if (fg.is_zero()) continue;
      if (!X.gb.generators.empty() && normal_form(fg, X.gb.generators, X.gb.order).is_zero()) continue;
      if (!radical_membership(fg, I, go)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      std::string s = "[";
      for (std::size_t i = 0; i < g.size(); ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < g[i].size(); ++j) s += (j ? " " : "") + std::to_string(g[i][j]);
      }
      rep.failures.push_back(s + "]");
      rep.holds = false;
    }
  }
  return rep;
}

EquivarianceReport equivariance_check(const ClosedSubsetAtRank& X, const GeometryOptions& opts) {
  bool skipped = false;
  auto gens = default_equivariance_generators(X.n, X.field.characteristic(), &skipped);
  auto rep = equivariance_check(X, gens, opts);
  rep.scaling_skipped = skipped;
  return rep;
}

// --------------------------------------------------------------------- Taylor

TaylorResult taylor_directional(const MultiPoly& f, std::size_t m) {
  const VarSet& X = f.vars();
  const std::size_t n = X.size();
  if (m == 0 || m > n) throw Error("taylor_directional: split size must be in 1..nvars");
  if (!f.is_weighted_homogeneous()) throw Error("taylor_directional: f is not homogeneous");
  bool depends = false;
  for (std::size_t i = 0; i < m; ++i) depends = depends || f.degree_in(i) > 0;
  if (!depends) throw NoDependence("taylor_directional: f does not involve the first " + std::to_string(m) + " variables");

  const BaseRing& R = f.ring();
  const std::uint64_t p = R.characteristic();
  std::vector<std::string> extra;
  for (std::size_t i = 1; i <= m; ++i) extra.push_back("#y" + std::to_string(i));
  extra.push_back("#t");
  VarSet W = X + VarSet(extra);
  const std::size_t tvar = n + m;
  std::vector<MultiPoly> images;
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly x = MultiPoly::variable(R, W, i);
    if (i < m) x += MultiPoly::variable(R, W, n + i) * MultiPoly::variable(R, W, tvar);
    images.push_back(x);
  }
  MultiPoly F = f.substitute(images);
  const unsigned top = static_cast<unsigned>(f.total_degree());
  unsigned k = 1;
  MultiPoly ck(R, W);
  for (; k <= top; ++k) {
    ck = F.coefficient_of_power(tvar, k);
    if (!ck.is_zero()) break;
  }
  if (ck.is_zero()) throw NoDependence("taylor_directional: expansion is constant in t");

  TaylorResult res;
  unsigned long q = 1;
  unsigned e = 0;
  if (p != 0)
    while (q < k) {
      q *= p;
      ++e;
    }
  if (q != k) throw ConsistencyError("taylor_directional: lowest t-power " + std::to_string(k) + " is not a power of p");
  res.e = e;
  res.q = q;
  MultiPoly rebuilt(R, W);
  for (std::size_t i = 0; i < m; ++i) {
    MultiPoly hi_w = ck.coefficient_of_power(n + i, static_cast<unsigned>(q));
    MultiPoly hi(R, X);
    for (const auto& [mono, c] : hi_w.terms()) {
      Monomial t(n);
      for (std::size_t v = 0; v < n; ++v) t.set(v, mono[v]);
      hi.add_term(t, c);
    }
    res.h.push_back(hi);
    rebuilt += hi_w.times_monomial(unit_mono(W.size(), n + i, static_cast<unsigned>(q)));
  }
  if (rebuilt != ck) throw ConsistencyError("taylor_directional: t^q coefficient is not of the form sum h_i y_i^q");
  return res;
}

}  // namespace pfcalc
