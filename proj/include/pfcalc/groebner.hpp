#pragma once

#include "pfcalc/multipoly.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pfcalc {

struct GroebnerOptions {
  /// Refuse (SizeGuardExceeded) once the working basis grows past this.
  std::size_t max_basis = 5000;
};

/// A reduced Groebner basis: monic generators sorted by decreasing leading
/// monomial. An empty generator list represents the zero ideal.
struct GroebnerBasis {
  BaseRing ring;
  VarSet vars;
  MonomialOrder order;
  std::vector<MultiPoly> generators;
  std::vector<Monomial> leading_monomials;

  bool is_unit_ideal() const { return generators.size() == 1 && leading_monomials[0].is_one(); }
  bool contains(const MultiPoly& f) const;
};

/// Remainder of f on division by G (largest reducible term first, first
/// matching divisor in list order). Coefficients must lie in QQ or F_p.
MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& G, MonomialOrder order);

/// Reduced Groebner basis of <F> by Buchberger's algorithm with the normal
/// selection strategy and the Gebauer-Moeller criteria.
GroebnerBasis buchberger(const std::vector<MultiPoly>& F, MonomialOrder order, const GroebnerOptions& opts = {});

/// Reduced basis over QQ together with cofactors: generators[i] equals
/// sum_j cofactors[i][j] * F[j].
struct TracedBasis {
  GroebnerBasis basis;
  std::vector<std::vector<MultiPoly>> cofactors;
};
TracedBasis buchberger_traced(const std::vector<MultiPoly>& F, MonomialOrder order,
                              const GroebnerOptions& opts = {});

/// Buchberger's criterion: every S-polynomial of G reduces to zero.
bool satisfies_buchberger_criterion(const std::vector<MultiPoly>& G, MonomialOrder order);

/// Krull dimension read off the staircase: n minus the smallest set of
/// variables meeting the support of every leading monomial; -1 for <1>.
long ideal_dimension(const GroebnerBasis& G);
long staircase_dimension(const std::vector<Monomial>& leading, std::size_t nvars);

/// Generators of <G> intersected with k[remaining variables], expressed over
/// the VarSet of remaining variables (original relative order).
std::vector<MultiPoly> eliminate(const std::vector<MultiPoly>& G, const std::vector<std::string>& drop,
                                 const GroebnerOptions& opts = {});

/// f in rad<G>, decided by 1 in <G, 1 - z f>.
bool radical_membership(const MultiPoly& f, const std::vector<MultiPoly>& G, const GroebnerOptions& opts = {});

/// S-polynomial of two nonzero polynomials over a field.
MultiPoly s_polynomial(const MultiPoly& f, const MultiPoly& g, MonomialOrder order);

}  // namespace pfcalc
