// Runs the thirteen acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include "helpers.hpp"
#include "oracle.hpp"
#include "pfcalc/coordring.hpp"
#include "pfcalc/geometry.hpp"
#include "pfcalc/schur.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace pfcalc;

namespace {

const BaseRing ZZ = BaseRing::integers();
const BaseRing QQ = BaseRing::rationals();

// First failed expectation wins; later ones are only counted.
struct Tally {
  std::size_t checks = 0, failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    std::ostringstream s;
    s << what << ": got " << got << ", want " << want;
    expect(got == want, s.str());
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::size_t> piece_dims(const FPModule& M, unsigned lo, unsigned hi) {
  std::vector<std::size_t> out;
  for (unsigned d = lo; d <= hi; ++d) out.push_back(graded_piece(M, d).dimension());
  return out;
}

FPModule residue_module(const BaseRing& R) {
  return FPModule(R, 1, {{RingElem::generator(R)}});
}

void crit1(Tally& t) {
  auto t0 = Clock::now();
  auto dims = piece_dims(residue_module(BaseRing::parse("QQ[t]/(t^2)")), 0, 6);
  double s = seconds_since(t0);
  t.equal(join(dims), std::string("2,1,1,1,1,1,1"), "dims d=0..6");
  t.expect(s < 1.0, "took " + std::to_string(s) + " s");
}

void crit2(Tally& t) {
  auto dims = piece_dims(residue_module(BaseRing::parse("Fp(2)[t]/(t^2)")), 0, 6);
  t.equal(join(dims), std::string("2,1,2,1,2,1,2"), "dims d=0..6");
}

void crit3(Tally& t) {
  auto dims = piece_dims(FPModule::integral(1, {{2}}), 0, 5);
  t.equal(join(dims), std::string("1,0,0,0,0,0"), "ranks d=0..5");
}

void crit4(Tally& t) {
  PolyTransformation a({{"v", 1}, {"w", 1}}, "v^3 + w^3");
  auto check = [&](std::size_t n, const std::vector<std::uint64_t>& primes, const std::map<std::uint64_t, long>& want) {
    auto t0 = Clock::now();
    auto rows = dimension_per_prime(a, n, primes);
    double s = seconds_since(t0);
    std::map<std::uint64_t, long> got;
    for (const auto& r : rows) got[r.prime] = r.dimension;
    for (const auto& [p, d] : want)
      t.equal(got.count(p) ? got[p] : -99, d, "n=" + std::to_string(n) + " p=" + std::to_string(p));
    t.expect(s < 60.0, "n=" + std::to_string(n) + " took " + std::to_string(s) + " s");
  };
  check(2, {2, 3, 5}, {{0, 4}, {2, 4}, {3, 2}, {5, 4}});
  check(3, {3}, {{0, 6}, {3, 3}});
}

void crit5(Tally& t) {
  PolyTransformation a({{"q1", 2}, {"q2", 2}, {"q3", 2}, {"q4", 2}}, "q1^2 + q2^2 + q3^2 + q4^2");
  auto X = image_closure(a, 2, BaseRing::prime_field(2));
  t.equal(X.vars.size(), std::size_t{5}, "ambient coordinates");
  t.equal(static_cast<long>(X.vars.size()) - X.dimension(), 2L, "codimension");
  for (const auto& g : X.gb.generators) t.expect(g.total_degree() == 1, "nonlinear generator " + g.to_string());
  // Coordinates are ordered x^4, x^3y, x^2y^2, xy^3, y^4: squares stay free, the rest is cut out.
  const bool in_ideal[] = {false, true, false, true, false};
  for (std::size_t i = 0; i < 5; ++i) {
    auto y = MultiPoly::variable(X.field, X.vars, i);
    t.expect(normal_form(y, X.gb.generators, X.gb.order).is_zero() == in_ideal[i],
             "coordinate " + X.vars.name(i) + " membership");
  }
}

void crit6(Tally& t) {
  for (std::uint64_t p : {2u, 3u}) {
    auto M = base_change_module(module_of_functor(evaluate(FunctorExpr::sym(p), 2), p), p);
    const BaseRing& F = M.ring();
    const std::size_t N = M.rank;  // p + 1, basis x^p, ..., y^p
    auto unit = [&](std::size_t i) {
      std::vector<RingElem> v(N, RingElem::zero(F));
      v[i] = RingElem::one(F);
      return v;
    };
    auto powers = spin(M, unit(0));
    t.equal(powers.size(), std::size_t{2}, "p=" + std::to_string(p) + " spin of x^p");
    t.expect(powers == std::vector<std::vector<RingElem>>{unit(0), unit(N - 1)},
             "p=" + std::to_string(p) + " spin of x^p is not span{x^p, y^p}");
    // Every vector outside span{x^p, y^p}.
    std::vector<RingElem> v(N, RingElem::zero(F));
    std::size_t total = 1;
    for (std::size_t i = 0; i < N; ++i) total *= p;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      bool middle = false;
      for (std::size_t i = 0; i < N; ++i) {
        v[i] = RingElem(F, static_cast<long>(c % p));
        c /= p;
        if (i > 0 && i + 1 < N && !v[i].is_zero()) middle = true;
      }
      if (!middle) continue;
      t.equal(spin(M, v).size(), N, "p=" + std::to_string(p) + " spin of non-power vector " + std::to_string(code));
    }
  }
}

void crit7(Tally& t) {
  const std::vector<std::uint64_t> primes{2, 3, 5};
  for (const char* text : {"Sym(2)", "Ext(3)", "Sym(2) (+) Ext(3)", "Tensor(Id, Id)", "Const(ZZ/2) (+) Id",
                           "Shift(1, Sym(2))"}) {
    auto P = FunctorExpr::parse(text);
    auto rep = dimension_function(P, primes, 7);
    for (std::uint64_t p : {0u, 2u, 3u, 5u}) {
      const std::string tag = std::string(text) + " p=" + std::to_string(p);
      const auto& poly = rep.per_prime.at(p);
      for (std::size_t n = 0; n <= 6; ++n) {
        long direct = static_cast<long>(fiber_dimension(evaluate(P, n).module, p));
        t.equal(poly.values.at(n), direct, tag + " f(" + std::to_string(n) + ") vs fiber dimension");
        t.equal(rep.recursion_values.at(p).at(n), direct, tag + " recursion at n=" + std::to_string(n));
      }
      t.expect(poly.degree() <= static_cast<long>(P.degree()), tag + " degree exceeds deg P");
      // Integer coefficients in the binomial basis; n! * monomial coefficients are integers.
      for (std::size_t k = 0; k < poly.monomial_coeffs.size(); ++k) {
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), P.degree());
        mpq_class scaled = poly.monomial_coeffs[k] * fact;
        t.expect(scaled.get_den() == 1, tag + " coefficient denominator");
      }
    }
  }
}

void crit8(Tally& t) {
  auto t0 = Clock::now();
  auto binom = [](unsigned long a, unsigned long b) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), a, b);
    return r;
  };
  for (auto [n, d] : std::vector<std::pair<std::size_t, unsigned>>{{1, 3}, {2, 2}, {2, 3}}) {
    auto A = std::make_shared<const SchurAlgebra>(n, d);
    t.equal(mpz_class(static_cast<unsigned long>(A->dimension())), binom(n * n + d, d),
            "dim S(" + std::to_string(n) + "," + std::to_string(d) + ")");
    auto e = identity_element(A);
    for (std::size_t i = 0; i < A->dimension(); ++i) {
      auto b = SchurElem::basis(A, i);
      t.expect(e * b == b && b * e == b, "identity fails on basis element " + A->alpha_to_string(i));
    }
  }
  for (unsigned d = 1; d <= 3; ++d) {
    auto A = std::make_shared<const SchurAlgebra>(1, d);
    for (std::size_t a = 0; a < A->dimension(); ++a)
      for (std::size_t b = 0; b < A->dimension(); ++b)
        for (std::size_t c = 0; c < A->dimension(); ++c) {
          auto x = SchurElem::basis(A, a), y = SchurElem::basis(A, b), z = SchurElem::basis(A, c);
          t.expect((x * y) * z == x * (y * z), "associativity n=1");
        }
  }
  std::mt19937_64 rng(8);
  for (unsigned d : {2u, 3u}) {
    auto A = std::make_shared<const SchurAlgebra>(2, d);
    std::uniform_int_distribution<std::size_t> pick(0, A->dimension() - 1);
    for (int k = 0; k < 200; ++k) {
      auto x = SchurElem::basis(A, pick(rng)), y = SchurElem::basis(A, pick(rng)), z = SchurElem::basis(A, pick(rng));
      t.expect((x * y) * z == x * (y * z), "associativity n=2 d=" + std::to_string(d));
    }
  }
  const BaseRing F5 = BaseRing::prime_field(5);
  for (unsigned d : {2u, 3u}) {
    auto A = std::make_shared<const SchurAlgebra>(2, d, F5);
    for (int k = 0; k < 50; ++k) {
      RingMatrix phi(2, std::vector<RingElem>(2)), psi = phi;
      for (auto* m : {&phi, &psi})
        for (auto& row : *m)
          for (auto& x : row) x = RingElem(F5, static_cast<long>(rng() % 5));
      t.expect(evaluation_embed(A, phi) * evaluation_embed(A, psi) ==
                   evaluation_embed(A, ring_matrix_product(phi, psi, F5)),
               "ev_phi * ev_psi != ev_(phi psi)");
    }
  }
  double s = seconds_since(t0);
  t.expect(s < 120.0, "took " + std::to_string(s) + " s");
}

void crit9(Tally& t) {
  VarSet V2({"x", "y"});
  auto rep = good_primes({parse_poly("3*x", ZZ, V2)}, {2, 3, 5, 7});
  t.expect(rep.bad_primes() == std::vector<std::uint64_t>{3}, "bad primes for <3x> are not exactly {3}");
  t.equal(rep.generic_dimension, 1L, "generic dimension of <3x>");
  for (const auto& v : rep.verdicts) t.equal(v.dimension, v.prime == 3 ? 2L : 1L, "dimension at p=" + std::to_string(v.prime));

  std::mt19937_64 rng(909);
  VarSet V3({"x", "y", "z"});
  const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MultiPoly> I;
    int gens = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < gens; ++k) {
      auto f = testing_util::random_poly(rng, ZZ, V3, 3, 3, 6);
      if (!f.is_zero()) I.push_back(f);
    }
    if (I.empty()) {
      --trial;
      continue;
    }
    auto sr = good_primes(I, primes);
    for (const auto& v : sr.verdicts) {
      if (!v.good) continue;
      const BaseRing Fp = BaseRing::prime_field(v.prime);
      FractionFieldReduction red(ZZ, v.prime);
      std::vector<MultiPoly> Ip;
      for (const auto& f : I) {
        auto g = f.map_coefficients(Fp, [&](const RingElem& c) { return red(c); });
        if (!g.is_zero()) Ip.push_back(g);
      }
      MonomialComparator cmp(V3, MonomialOrder::grevlex());
      auto fresh = oracle::groebner(Ip, cmp);
      std::vector<Monomial> lms;
      for (const auto& g : fresh) lms.push_back(g.leading_monomial(cmp));
      t.expect(lms == v.leading_monomials, "trial " + std::to_string(trial) + " p=" + std::to_string(v.prime) +
                                               ": staircase differs from recomputation");
      t.expect(staircase_dimension(lms, 3) == sr.generic_dimension, "good prime with a different dimension");
    }
  }
}

void crit10(Tally& t) {
  auto M = FPModule::integral(2, {{2, 4}});
  std::vector<std::vector<mpz_class>> N{{1, 0}, {0, 1}};
  auto cert = generic_freeness(M, N);
  t.expect(mpz_divisible_ui_p(cert.r.get_mpz_t(), 2) != 0, "r = " + cert.r.get_str() + " is odd");
  std::size_t tested = 0;
  for (std::uint64_t p = 2; tested < 20; ++p) {
    if (!is_prime(p) || mpz_divisible_ui_p(cert.r.get_mpz_t(), p)) continue;
    ++tested;
    t.equal(fiber_dimension(M, p), cert.m(), "fiber dimension at p=" + std::to_string(p));
    t.equal(submodule_fiber_dimension(M, cert.basis_vectors, p), cert.m(), "basis spans at p=" + std::to_string(p));
    std::vector<std::vector<mpz_class>> head(cert.basis_vectors.begin(), cert.basis_vectors.begin() + cert.k);
    t.equal(submodule_fiber_dimension(M, head, p), cert.k, "N-part independent at p=" + std::to_string(p));
    t.equal(submodule_fiber_dimension(M, N, p), cert.k, "N-part spans N at p=" + std::to_string(p));
  }
}

void crit11(Tally& t) {
  std::vector<std::pair<PolyTransformation, std::vector<std::size_t>>> cases{
      {PolyTransformation({{"v", 1}, {"w", 1}}, "v^3 + w^3"), {1, 2, 3}},
      {PolyTransformation({{"q1", 2}, {"q2", 2}, {"q3", 2}, {"q4", 2}}, "q1^2 + q2^2 + q3^2 + q4^2"), {1, 2}},
      {PolyTransformation({{"a", 1}, {"b", 2}}, "a^2*b - 4*b^2"), {1, 2}},
      {PolyTransformation({{"u", 1}}, "u^2"), {2, 3}},
  };
  std::size_t gens = 0;
  for (const auto& [a, ranks] : cases)
    for (auto n : ranks)
      for (const BaseRing& K : {QQ, BaseRing::prime_field(2), BaseRing::prime_field(3)}) {
        auto X = image_closure(a, n, K);
        for (const auto& g : X.gb.generators) {
          ++gens;
          t.expect(g.is_weighted_homogeneous(), a.rule().to_string() + " n=" + std::to_string(n) + " over " + K.tag() +
                                                    ": " + g.to_string());
        }
      }
  t.expect(gens > 0, "no generators produced");
}

MultiPoly derivative(const MultiPoly& f, std::size_t i) {
  MultiPoly out(f.ring(), f.vars());
  for (const auto& [m, c] : f.terms()) {
    if (m[i] == 0) continue;
    Monomial m2 = m;
    m2.set(i, m[i] - 1);
    out.add_term(m2, c * RingElem(f.ring(), static_cast<long>(m[i])));
  }
  return out;
}

void crit12(Tally& t) {
  std::mt19937_64 rng(1212);
  VarSet V({"x1", "x2", "x3"});
  int done = 0;
  while (done < 50) {
    unsigned deg = 1 + static_cast<unsigned>(rng() % 4);
    MultiPoly f(QQ, V);
    for (const auto& m : monomials_of_degree(3, deg))
      if (rng() % 2) f.add_term(m, RingElem(QQ, static_cast<long>(rng() % 9) - 4));
    std::size_t m = 1 + rng() % 3;
    bool involved = false;
    for (std::size_t i = 0; i < m; ++i) involved = involved || f.degree_in(i) > 0;
    if (!involved) continue;
    auto r = taylor_directional(f, m);
    t.equal(r.e, 0u, "e in characteristic 0");
    for (std::size_t i = 0; i < m; ++i) t.expect(r.h.at(i) == derivative(f, i), "h_i != df/dx_i for " + f.to_string());
    ++done;
  }
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const BaseRing Fp = BaseRing::prime_field(p);
    VarSet X({"x"});
    auto r = taylor_directional(parse_poly("x^" + std::to_string(p), Fp, X), 1);
    t.equal(r.e, 1u, "e for x^" + std::to_string(p));
    t.expect(r.h.size() == 1 && r.h[0] == MultiPoly::constant(Fp, X, RingElem::one(Fp)), "h != 1 for x^p");
  }
}

void crit13(Tally& t) {
  const BaseRing F5 = BaseRing::prime_field(5);
  std::mt19937_64 rng(1313);
  for (const VarSet& V : {VarSet({"x"}), VarSet({"x", "y"})})
    for (auto ord : {MonomialOrder::grevlex(), MonomialOrder::lex()}) {
      MonomialComparator cmp(V, ord);
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<MultiPoly> F;
        for (int i = 0; i < 1 + trial % 2; ++i) F.push_back(testing_util::random_poly(rng, F5, V, 3, 4));
        F.erase(std::remove_if(F.begin(), F.end(), [](const MultiPoly& f) { return f.is_zero(); }), F.end());
        if (F.empty()) continue;
        auto gb = buchberger(F, ord);
        t.expect(gb.generators == oracle::groebner(F, cmp), "basis differs from oracle");
        t.expect(oracle::is_groebner(gb.generators, cmp), "basis fails the S-pair test");
        auto f = testing_util::random_poly(rng, F5, V, 4, 5);
        t.expect(normal_form(f, F, ord) == oracle::divide(f, F, cmp), "normal form vs oracle (input list)");
        t.expect(normal_form(f, gb.generators, ord) == oracle::divide(f, gb.generators, cmp),
                 "normal form vs oracle (basis)");
      }
    }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Tally&)>>> criteria{
      {"coordinate-ring dimensions over QQ[t]/(t^2)", crit1},
      {"coordinate-ring dimensions over F_2[t]/(t^2)", crit2},
      {"Z/2 over Z has R[M] = R", crit3},
      {"cube-sum dimensions per prime", crit4},
      {"char-2 four squares is a codimension-2 linear space", crit5},
      {"Frobenius subfunctor by spinning", crit6},
      {"dimension functions: direct vs shift recursion", crit7},
      {"Schur algebra axioms", crit8},
      {"Groebner specialization and good primes", crit9},
      {"generic freeness of Z^2/<(2,4)>", crit10},
      {"image-closure ideals are homogeneous", crit11},
      {"directional Taylor expansion", crit12},
      {"Groebner engine vs textbook oracle over F_5", crit13},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Tally t;
    auto t0 = Clock::now();
    std::string error;
    try {
      criteria[i].second(t);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool ok = error.empty() && t.failures == 0 && t.checks > 0;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds_since(t0));
    std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1 < 10 ? " " : "") << i + 1 << "  " << criteria[i].first
              << "  (" << t.checks << " checks, " << timing << ")";
    if (!error.empty()) std::cout << "  exception: " << error;
    else if (t.failures) std::cout << "  " << t.failures << " failed, first: " << t.first;
    std::cout << "\n";
    failed += ok ? 0 : 1;
  }
  return failed;
}
