#include "pfcalc/groebner.hpp"

#include <algorithm>
#include <set>

namespace pfcalc {

namespace {

template <class F>
struct Poly {
  using Scalar = typename F::Scalar;
  std::vector<Monomial> mon;  // strictly decreasing
  std::vector<Scalar> coef;

  bool empty() const { return mon.empty(); }
  std::size_t size() const { return mon.size(); }
};

template <class F>
struct Elem {
  Poly<F> p;
  std::vector<Poly<F>> cof;  // empty unless tracing
  Monomial lm;
  std::uint64_t mask = 0;
};

template <class F>
class Engine {
 public:
  using Scalar = typename F::Scalar;

  Engine(F field, const VarSet& vars, MonomialOrder order)
      : k_(std::move(field)), cmp_(vars, order), weights_(vars.weights()) {}

  const MonomialComparator& cmp() const { return cmp_; }
  const F& field() const { return k_; }

  Poly<F> from(const MultiPoly& f) const {
    Poly<F> p;
    for (auto& [m, c] : f.sorted_terms(cmp_)) {
      p.mon.push_back(m);
      p.coef.push_back(to_scalar(k_, c));
    }
    // Coefficients may vanish on reduction into F_p.
    std::size_t w = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (k_.is_zero(p.coef[i])) continue;
      if (w != i) {
        p.mon[w] = p.mon[i];
        p.coef[w] = p.coef[i];
      }
      ++w;
    }
    p.mon.resize(w);
    p.coef.resize(w);
    return p;
  }

  MultiPoly to(const Poly<F>& p, const VarSet& vars) const {
    MultiPoly f(k_.ring(), vars);
    for (std::size_t i = 0; i < p.size(); ++i) f.add_term(p.mon[i], from_scalar(k_, p.coef[i]));
    return f;
  }

  /// a[from..] - c * q * b[bfrom..]
  Poly<F> sub_mul(const Poly<F>& a, std::size_t from, const Scalar& c, const Monomial& q, const Poly<F>& b,
                  std::size_t bfrom) const {
    Poly<F> r;
    r.mon.reserve(a.size() - from + b.size() - bfrom);
    r.coef.reserve(a.size() - from + b.size() - bfrom);
    std::size_t i = from, j = bfrom;
    while (i < a.size() || j < b.size()) {
      if (j == b.size()) {
        r.mon.push_back(a.mon[i]);
        r.coef.push_back(a.coef[i]);
        ++i;
        continue;
      }
      Monomial bm = q * b.mon[j];
      int s = i == a.size() ? -1 : cmp_.compare(a.mon[i], bm);
      if (s > 0) {
        r.mon.push_back(a.mon[i]);
        r.coef.push_back(a.coef[i]);
        ++i;
      } else if (s < 0) {
        r.mon.push_back(bm);
        r.coef.push_back(k_.neg(k_.mul(c, b.coef[j])));
        ++j;
      } else {
        Scalar v = k_.sub(a.coef[i], k_.mul(c, b.coef[j]));
        if (!k_.is_zero(v)) {
          r.mon.push_back(a.mon[i]);
          r.coef.push_back(v);
        }
        ++i;
        ++j;
      }
    }
    return r;
  }

  void scale(Poly<F>& p, const Scalar& c) const {
    for (auto& x : p.coef) x = k_.mul(x, c);
  }

  void make_monic(Elem<F>& e) const {
    if (e.p.empty()) return;
    if (!k_.is_one(e.p.coef[0])) {
      Scalar inv = k_.inv(e.p.coef[0]);
      scale(e.p, inv);
      for (auto& c : e.cof) scale(c, inv);
    }
    e.lm = e.p.mon[0];
    e.mask = e.lm.support_mask();
  }

  const Elem<F>* find_divisor(const Monomial& m, const std::vector<const Elem<F>*>& G) const {
    const std::uint64_t mm = m.support_mask();
    for (const Elem<F>* g : G) {
      if ((g->mask & ~mm) != 0) continue;
      if (g->lm.divides(m)) return g;
    }
    return nullptr;
  }

  /// Full reduction of f by G (monic elements). Cofactor lists are updated
  /// alongside when present.
  Elem<F> reduce(Elem<F> f, const std::vector<const Elem<F>*>& G) const {
    Poly<F> rem;
    std::size_t head = 0;
    while (head < f.p.size()) {
      const Monomial m = f.p.mon[head];
      const Elem<F>* g = find_divisor(m, G);
      if (!g) {
        rem.mon.push_back(m);
        rem.coef.push_back(f.p.coef[head]);
        ++head;
        continue;
      }
      Scalar c = f.p.coef[head];
      Monomial q = m / g->lm;
      f.p = sub_mul(f.p, head + 1, c, q, g->p, 1);
      head = 0;
      for (std::size_t j = 0; j < f.cof.size(); ++j) f.cof[j] = sub_mul(f.cof[j], 0, c, q, g->cof[j], 0);
    }
    f.p = std::move(rem);
    if (!f.p.empty()) {
      f.lm = f.p.mon[0];
      f.mask = f.lm.support_mask();
    }
    return f;
  }

  Elem<F> s_poly(const Elem<F>& a, const Elem<F>& b) const {
    Monomial l = Monomial::lcm(a.lm, b.lm);
    Monomial qa = l / a.lm, qb = l / b.lm;
    Elem<F> s;
    Poly<F> ta = sub_mul(Poly<F>{}, 0, k_.neg(k_.one()), qa, a.p, 1);
    s.p = sub_mul(ta, 0, k_.one(), qb, b.p, 1);
    s.cof.resize(a.cof.size());
    for (std::size_t j = 0; j < a.cof.size(); ++j) {
      Poly<F> ca = sub_mul(Poly<F>{}, 0, k_.neg(k_.one()), qa, a.cof[j], 0);
      s.cof[j] = sub_mul(ca, 0, k_.one(), qb, b.cof[j], 0);
    }
    return s;
  }

  unsigned degree(const Monomial& m) const { return m.weighted_degree(weights_); }

 private:
  F k_;
  MonomialComparator cmp_;
  std::vector<unsigned> weights_;
};

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  unsigned deg;
};

template <class F>
struct Buchberger {
  const Engine<F>& eng;
  std::size_t max_basis;
  std::vector<Elem<F>> basis;
  std::vector<bool> active;

  struct PairLess {
    const Engine<F>* eng;
    bool operator()(const Pair& a, const Pair& b) const {
      if (a.deg != b.deg) return a.deg < b.deg;
      if (int c = eng->cmp().compare(a.lcm, b.lcm); c != 0) return c < 0;
      if (a.j != b.j) return a.j < b.j;
      return a.i < b.i;
    }
  };
  std::set<Pair, PairLess> pairs{PairLess{&eng}};

  Buchberger(const Engine<F>& e, std::size_t mb) : eng(e), max_basis(mb) {}

  std::vector<const Elem<F>*> active_set() const {
    std::vector<const Elem<F>*> out;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (active[i]) out.push_back(&basis[i]);
    return out;
  }

  /// Gebauer-Moeller installation of a new element.
  void update(Elem<F> h) {
    if (basis.size() >= max_basis) {
      throw SizeGuardExceeded("Groebner basis exceeded " + std::to_string(max_basis) + " elements");
    }
    const std::size_t hi = basis.size();
    basis.push_back(std::move(h));
    active.push_back(true);
    const Monomial& hlm = basis[hi].lm;

    std::vector<Pair> C;
    for (std::size_t g = 0; g < hi; ++g) {
      if (!active[g]) continue;
      Monomial l = Monomial::lcm(hlm, basis[g].lm);
      C.push_back({g, hi, l, eng.degree(l)});
    }
    std::vector<Pair> D;
    for (std::size_t c = 0; c < C.size(); ++c) {
      const Pair& p = C[c];
      bool keep = Monomial::coprime(hlm, basis[p.i].lm);
      if (!keep) {
        keep = true;
        for (std::size_t o = c + 1; o < C.size() && keep; ++o)
          if (C[o].lcm.divides(p.lcm)) keep = false;
        for (std::size_t o = 0; o < D.size() && keep; ++o)
          if (D[o].lcm.divides(p.lcm)) keep = false;
      }
      if (keep) D.push_back(p);
    }

    for (auto it = pairs.begin(); it != pairs.end();) {
      const Pair& p = *it;
      if (hlm.divides(p.lcm) && Monomial::lcm(basis[p.i].lm, hlm) != p.lcm &&
          Monomial::lcm(basis[p.j].lm, hlm) != p.lcm) {
        it = pairs.erase(it);
      } else {
        ++it;
      }
    }
    for (const Pair& p : D)
      if (!Monomial::coprime(hlm, basis[p.i].lm)) pairs.insert(p);

    for (std::size_t g = 0; g < hi; ++g)
      if (active[g] && hlm.divides(basis[g].lm)) active[g] = false;
  }

  /// Returns true when the unit ideal was reached.
  bool add(Elem<F> f) {
    f = eng.reduce(std::move(f), active_set());
    if (f.p.empty()) return false;
    eng.make_monic(f);
    bool unit = f.lm.is_one();
    update(std::move(f));
    return unit;
  }

  bool run() {
    while (!pairs.empty()) {
      Pair p = *pairs.begin();
      pairs.erase(pairs.begin());
      if (add(eng.s_poly(basis[p.i], basis[p.j]))) return true;
    }
    return false;
  }

  /// Reduced basis, decreasing leading monomials.
  std::vector<Elem<F>> finish(bool unit) {
    std::vector<Elem<F>> out;
    if (unit) {
      for (std::size_t i = basis.size(); i-- > 0;)
        if (active[i] && basis[i].lm.is_one()) {
          out.push_back(basis[i]);
          return out;
        }
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (active[i]) idx.push_back(i);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return eng.cmp().greater(basis[a].lm, basis[b].lm); });
    for (std::size_t a : idx) {
      std::vector<const Elem<F>*> others;
      for (std::size_t b : idx)
        if (b != a) others.push_back(&basis[b]);
      Elem<F> e = basis[a];
      Elem<F> lead;
      lead.p.mon.push_back(e.p.mon[0]);
      lead.p.coef.push_back(e.p.coef[0]);
      Elem<F> tail;
      tail.p.mon.assign(e.p.mon.begin() + 1, e.p.mon.end());
      tail.p.coef.assign(e.p.coef.begin() + 1, e.p.coef.end());
      tail.cof = e.cof;
      // Reduce the tail only; the cofactor bookkeeping is carried by `tail`.
      Elem<F> red = eng.reduce(std::move(tail), others);
      Elem<F> r;
      r.p = eng.sub_mul(red.p, 0, eng.field().neg(eng.field().one()), Monomial(e.lm.size()), lead.p, 0);
      r.cof = std::move(red.cof);
      eng.make_monic(r);
      out.push_back(std::move(r));
    }
    return out;
  }
};

void check_vars(const std::vector<MultiPoly>& F_) {
  for (std::size_t i = 1; i < F_.size(); ++i)
    if (F_[i].vars() != F_[0].vars()) throw Error("polynomials live over different variable sets");
}

BaseRing field_of(const std::vector<MultiPoly>& polys) {
  if (polys.empty()) throw Error("empty polynomial list");
  BaseRing r = polys[0].ring();
  for (const auto& p : polys)
    if (p.ring() != r) throw RingMismatch("mixed coefficient rings " + r.tag() + " and " + p.ring().tag());
  if (r.kind() != BaseRing::Kind::Rationals && r.kind() != BaseRing::Kind::PrimeField) {
    throw Error("Groebner computations need coefficients in QQ or F_p, got " + r.tag());
  }
  return r;
}

template <class F>
std::vector<Elem<F>> run_buchberger(const Engine<F>& eng, const std::vector<MultiPoly>& input, bool trace,
                                    std::size_t max_basis) {
  Buchberger<F> bb(eng, max_basis);
  const F& k = eng.field();
  // Insert inputs in increasing order of leading monomial.
  std::vector<Elem<F>> elems;
  for (std::size_t j = 0; j < input.size(); ++j) {
    Elem<F> e;
    e.p = eng.from(input[j]);
    if (trace) {
      e.cof.assign(input.size(), Poly<F>{});
      e.cof[j].mon.push_back(Monomial(input[j].nvars()));
      e.cof[j].coef.push_back(k.one());
    }
    if (e.p.empty()) continue;
    e.lm = e.p.mon[0];
    elems.push_back(std::move(e));
  }
  std::stable_sort(elems.begin(), elems.end(),
                   [&](const Elem<F>& a, const Elem<F>& b) { return eng.cmp().compare(a.lm, b.lm) < 0; });
  bool unit = false;
  for (auto& e : elems) {
    if (bb.add(std::move(e))) {
      unit = true;
      break;
    }
  }
  if (!unit) unit = bb.run();
  return bb.finish(unit);
}

template <class F>
GroebnerBasis package(const Engine<F>& eng, const std::vector<Elem<F>>& elems, const VarSet& vars,
                      MonomialOrder order) {
  GroebnerBasis gb;
  gb.ring = eng.field().ring();
  gb.vars = vars;
  gb.order = order;
  for (const auto& e : elems) {
    gb.generators.push_back(eng.to(e.p, vars));
    gb.leading_monomials.push_back(e.lm);
  }
  return gb;
}

long min_hitting_set(const std::vector<std::uint64_t>& sets, std::uint64_t chosen, long size, long best) {
  if (size >= best) return best;
  const std::uint64_t* pick = nullptr;
  int pick_count = 65;
  for (const auto& s : sets) {
    if (s & chosen) continue;
    int c = __builtin_popcountll(s);
    if (c < pick_count) {
      pick_count = c;
      pick = &s;
    }
  }
  if (!pick) return size;
  if (size + 1 >= best) return best;
  for (std::uint64_t rest = *pick; rest; rest &= rest - 1) {
    std::uint64_t bit = rest & (~rest + 1);
    best = std::min(best, min_hitting_set(sets, chosen | bit, size + 1, best));
  }
  return best;
}

}  // namespace

bool GroebnerBasis::contains(const MultiPoly& f) const {
  if (f.is_zero()) return true;
  if (generators.empty()) return false;
  return normal_form(f, generators, order).is_zero();
}

MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& G, MonomialOrder order) {
  std::vector<MultiPoly> all = G;
  all.push_back(f);
  BaseRing ring = field_of(all);
  check_vars(all);
  return with_field(ring, [&](auto k) {
    using F = decltype(k);
    Engine<F> eng(k, f.vars(), order);
    std::vector<Elem<F>> elems;
    elems.reserve(G.size());
    for (const auto& g : G) {
      Elem<F> e;
      e.p = eng.from(g);
      if (e.p.empty()) continue;
      eng.make_monic(e);
      elems.push_back(std::move(e));
    }
    std::vector<const Elem<F>*> ptrs;
    for (const auto& e : elems) ptrs.push_back(&e);
    Elem<F> x;
    x.p = eng.from(f);
    return eng.to(eng.reduce(std::move(x), ptrs).p, f.vars());
  });
}

GroebnerBasis buchberger(const std::vector<MultiPoly>& F_, MonomialOrder order, const GroebnerOptions& opts) {
  BaseRing ring = field_of(F_);
  check_vars(F_);
  const VarSet& vars = F_[0].vars();
  return with_field(ring, [&](auto k) {
    using F = decltype(k);
    Engine<F> eng(k, vars, order);
    return package(eng, run_buchberger(eng, F_, false, opts.max_basis), vars, order);
  });
}

TracedBasis buchberger_traced(const std::vector<MultiPoly>& F_, MonomialOrder order, const GroebnerOptions& opts) {
  BaseRing ring = field_of(F_);
  if (ring.kind() != BaseRing::Kind::Rationals) throw Error("traced Groebner bases are computed over QQ");
  check_vars(F_);
  const VarSet& vars = F_[0].vars();
  Engine<RationalField> eng(RationalField{}, vars, order);
  auto elems = run_buchberger(eng, F_, true, opts.max_basis);
  TracedBasis out;
  out.basis = package(eng, elems, vars, order);
  for (const auto& e : elems) {
    std::vector<MultiPoly> row;
    for (const auto& c : e.cof) row.push_back(eng.to(c, vars));
    out.cofactors.push_back(std::move(row));
  }
  return out;
}

MultiPoly s_polynomial(const MultiPoly& f, const MultiPoly& g, MonomialOrder order) {
  BaseRing ring = field_of({f, g});
  return with_field(ring, [&](auto k) {
    using F = decltype(k);
    Engine<F> eng(k, f.vars(), order);
    Elem<F> a, b;
    a.p = eng.from(f);
    b.p = eng.from(g);
    if (a.p.empty() || b.p.empty()) throw Error("S-polynomial of a zero polynomial");
    eng.make_monic(a);
    eng.make_monic(b);
    return eng.to(eng.s_poly(a, b).p, f.vars());
  });
}

bool satisfies_buchberger_criterion(const std::vector<MultiPoly>& G, MonomialOrder order) {
  if (G.empty()) return true;
  BaseRing ring = field_of(G);
  check_vars(G);
  return with_field(ring, [&](auto k) {
    using F = decltype(k);
    Engine<F> eng(k, G[0].vars(), order);
    std::vector<Elem<F>> elems;
    for (const auto& g : G) {
      Elem<F> e;
      e.p = eng.from(g);
      if (e.p.empty()) continue;
      eng.make_monic(e);
      elems.push_back(std::move(e));
    }
    std::vector<const Elem<F>*> ptrs;
    for (const auto& e : elems) ptrs.push_back(&e);
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (std::size_t j = i + 1; j < elems.size(); ++j) {
        if (Monomial::coprime(elems[i].lm, elems[j].lm)) continue;
        if (!eng.reduce(eng.s_poly(elems[i], elems[j]), ptrs).p.empty()) return false;
      }
    return true;
  });
}

long staircase_dimension(const std::vector<Monomial>& leading, std::size_t nvars) {
  std::vector<std::uint64_t> sets;
  for (const auto& m : leading) {
    if (m.is_one()) return -1;
    sets.push_back(m.support_mask());
  }
  // Drop non-minimal supports.
  std::sort(sets.begin(), sets.end(), [](auto a, auto b) { return __builtin_popcountll(a) < __builtin_popcountll(b); });
  std::vector<std::uint64_t> minimal;
  for (auto s : sets) {
    bool redundant = false;
    for (auto t : minimal)
      if ((t & s) == t) redundant = true;
    if (!redundant) minimal.push_back(s);
  }
  long cover = min_hitting_set(minimal, 0, 0, static_cast<long>(nvars) + 1);
  return static_cast<long>(nvars) - cover;
}

long ideal_dimension(const GroebnerBasis& G) { return staircase_dimension(G.leading_monomials, G.vars.size()); }

std::vector<MultiPoly> eliminate(const std::vector<MultiPoly>& G, const std::vector<std::string>& drop,
                                 const GroebnerOptions& opts) {
  if (G.empty()) return {};
  check_vars(G);
  const VarSet& vars = G[0].vars();
  std::vector<std::size_t> order_pos, keep;
  std::vector<bool> dropped(vars.size(), false);
  for (const auto& name : drop) {
    long i = vars.index_of(name);
    if (i < 0) throw Error("eliminate: unknown variable '" + name + "'");
    if (!dropped[i]) order_pos.push_back(static_cast<std::size_t>(i));
    dropped[i] = true;
  }
  const std::size_t block = order_pos.size();
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!dropped[i]) {
      order_pos.push_back(i);
      keep.push_back(i);
    }
  VarSet reordered = vars.select(order_pos);
  std::vector<std::size_t> where(vars.size());
  for (std::size_t i = 0; i < order_pos.size(); ++i) where[order_pos[i]] = i;
  std::vector<MultiPoly> moved;
  for (const auto& g : G) moved.push_back(g.embed(reordered, where));

  GroebnerBasis gb = buchberger(moved, MonomialOrder::elimination(block), opts);
  VarSet rest = vars.select(keep);
  std::vector<std::size_t> back(reordered.size(), 0);
  for (std::size_t i = 0; i < keep.size(); ++i) back[block + i] = i;
  std::vector<MultiPoly> out;
  for (std::size_t i = 0; i < gb.generators.size(); ++i) {
    const Monomial& lm = gb.leading_monomials[i];
    bool free_of_block = true;
    for (std::size_t v = 0; v < block; ++v)
      if (lm[v]) free_of_block = false;
    if (!free_of_block) continue;
    MultiPoly p(gb.ring, rest);
    for (const auto& [m, c] : gb.generators[i].terms()) {
      Monomial mm(rest.size());
      for (std::size_t v = 0; v < rest.size(); ++v) mm.set(v, m[block + v]);
      p.add_term(mm, c);
    }
    out.push_back(std::move(p));
  }
  return out;
}

bool radical_membership(const MultiPoly& f, const std::vector<MultiPoly>& G, const GroebnerOptions& opts) {
  if (f.is_zero()) return true;
  std::string z = "_z";
  while (f.vars().index_of(z) >= 0) z += "_";
  VarSet ext = f.vars() + VarSet({z});
  std::vector<std::size_t> pos(f.nvars());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
  std::vector<MultiPoly> polys;
  for (const auto& g : G) polys.push_back(g.embed(ext, pos));
  MultiPoly zf = MultiPoly::variable(f.ring(), ext, f.nvars()) * f.embed(ext, pos);
  polys.push_back(MultiPoly::constant(f.ring(), ext, RingElem::one(f.ring())) - zf);
  return buchberger(polys, MonomialOrder::grevlex(), opts).is_unit_ideal();
}

}  // namespace pfcalc
