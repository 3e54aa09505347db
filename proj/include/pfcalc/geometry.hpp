#pragma once

#include "pfcalc/groebner.hpp"
#include "pfcalc/pfunctor.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace pfcalc {

/// Hook for computing (or fetching) Groebner bases; defaults to buchberger.
using GroebnerFn = std::function<GroebnerBasis(const std::vector<MultiPoly>&, MonomialOrder, const GroebnerOptions&)>;

struct GeometryOptions {
  std::size_t max_vars = 40;
  std::size_t max_basis = 5000;
  unsigned max_degree = 8;
  unsigned threads = 1;
  GroebnerFn groebner;  // empty: buchberger
};

/// One named source component, an element of Sym^degree(V).
struct SourceComponent {
  std::string name;
  unsigned degree = 1;
};

/// alpha: (+)_k Sym^{d_k} -> Sym^D given by a polynomial in the component
/// names, read in the symmetric algebra of V.
class PolyTransformation {
 public:
  PolyTransformation(std::vector<SourceComponent> source, const std::string& rule);

  const std::vector<SourceComponent>& source() const { return source_; }
  const MultiPoly& rule() const { return rule_; }
  unsigned target_degree() const { return target_degree_; }
  FunctorExpr source_functor() const;
  FunctorExpr target_functor() const;

  /// Source coordinates at rank n: per component, one per degree-d monomial,
  /// weighted by d.
  VarSet source_vars(std::size_t n) const;
  /// Target coordinates at rank n, weighted by D.
  VarSet target_vars(std::size_t n) const;
  /// alpha at rank n: one polynomial in source_vars(n) per target coordinate.
  std::vector<MultiPoly> expand(std::size_t n) const;

 private:
  std::vector<SourceComponent> source_;
  MultiPoly rule_;
  unsigned target_degree_ = 0;
};

/// Coordinate names and standard-grading weights of P(K^n).
VarSet functor_coordinates(const FunctorExpr& P, std::size_t n, const std::string& stem = "y");

/// Samples alpha(Q(phi) c) = P(phi) alpha(c) on random integer data.
bool transformation_equivariant_on_samples(const PolyTransformation& a, std::size_t n, std::size_t samples,
                                           std::uint64_t seed);

struct ClosedSubsetAtRank {
  FunctorExpr functor;
  std::size_t n = 0;
  BaseRing field;
  VarSet vars;
  std::vector<MultiPoly> generators;
  GroebnerBasis gb;

  long dimension() const { return ideal_dimension(gb); }
};

/// Closed subset V(generators) with the Groebner basis filled in.
ClosedSubsetAtRank closed_subset(const FunctorExpr& P, std::size_t n, const BaseRing& field, const VarSet& vars,
                                 const std::vector<MultiPoly>& generators, const GeometryOptions& opts = {});

/// Zariski closure of the image of alpha at rank n over QQ or F_p, by
/// eliminating the source coordinates from the graph ideal.
ClosedSubsetAtRank image_closure(const PolyTransformation& a, std::size_t n, const BaseRing& field,
                                 const GeometryOptions& opts = {});

struct PrimeDimension {
  std::uint64_t prime = 0;
  long dimension = 0;
  std::size_t basis_size = 0;
  double time_ms = 0;
};

/// Image-closure dimension over QQ (prime 0) and each F_p, in prime order.
std::vector<PrimeDimension> dimension_per_prime(const PolyTransformation& a, std::size_t n,
                                                const std::vector<std::uint64_t>& primes,
                                                const GeometryOptions& opts = {});

struct PrimeVerdict {
  std::uint64_t prime = 0;
  bool good = false;  // p does not divide r and the reduction passed Buchberger's criterion
  long dimension = 0;
  std::vector<Monomial> leading_monomials;
  std::vector<MultiPoly> basis;  // over F_p
};

struct SpecializationReport {
  GroebnerBasis generic;                  // over QQ
  std::vector<MultiPoly> integer_basis;   // generic basis scaled to primitive integer polynomials
  mpz_class r;
  long generic_dimension = 0;
  std::vector<PrimeVerdict> verdicts;     // in prime order
  std::vector<std::uint64_t> bad_primes() const;
};

/// Generic basis over QQ, r = product of the leading coefficients of the
/// integer-cleared basis times the denominators of the cofactors expressing
/// it in the input, and a per-prime verdict.
SpecializationReport good_primes(const std::vector<MultiPoly>& ideal, const std::vector<std::uint64_t>& primes,
                                 MonomialOrder order = MonomialOrder::grevlex(), const GeometryOptions& opts = {});

struct TransferEntry {
  std::uint64_t prime = 0;
  bool vanishes = false;
  bool inferred_from_generic = false;  // good prime of the radical witness
};

struct VanishingReport {
  bool generic = false;
  std::vector<TransferEntry> entries;
};

/// Whether f vanishes on V(I) over QQ-bar and over each F_p-bar.
VanishingReport vanishing_transfer(const MultiPoly& f, const std::vector<MultiPoly>& ideal,
                                   const std::vector<std::uint64_t>& primes, const GeometryOptions& opts = {});

struct EquivarianceReport {
  bool holds = true;
  std::size_t generators_checked = 0;
  std::vector<std::string> failures;  // descriptions of failing generator matrices
  bool scaling_skipped = false;       // no non-identity scalar in F_2
};

/// Default substitution set: transpositions, transvections e_i -> e_i + e_j,
/// one scaling per basis vector, diagonal idempotents.
std::vector<std::vector<std::vector<long>>> default_equivariance_generators(std::size_t n, std::uint64_t characteristic,
                                                                            bool* scaling_skipped = nullptr);

/// Checks f(P(g) y) in rad I_X for every generator f of X and every g.
EquivarianceReport equivariance_check(const ClosedSubsetAtRank& X,
                                      const std::vector<std::vector<std::vector<long>>>& generators,
                                      const GeometryOptions& opts = {});
EquivarianceReport equivariance_check(const ClosedSubsetAtRank& X, const GeometryOptions& opts = {});

class NoDependence : public Error {
 public:
  using Error::Error;
};

struct TaylorResult {
  unsigned e = 0;
  unsigned long q = 1;  // p^e, or 1 in characteristic 0
  std::vector<MultiPoly> h;
};

/// f(x_1 + t y_1, ..., x_m + t y_m, x_{m+1}, ...) = f + t^q sum h_i y_i^q + O(t^{q+1}).
TaylorResult taylor_directional(const MultiPoly& f, std::size_t m);

}  // namespace pfcalc
