#pragma once

#include "pfcalc/fpmod.hpp"
#include "pfcalc/multipoly.hpp"

#include <map>
#include <utility>
#include <vector>

namespace pfcalc {

/// Default coordinate names: "x" for one generator, x1..xn otherwise.
VarSet coordinate_vars(std::size_t n, const std::string& stem = "x");

/// A polynomial law M -> R^m stored through its values on the generic
/// element: body[i] is the i-th target coordinate in x_1..x_n.
struct PolyLawRep {
  FPModule source;
  VarSet vars;
  std::vector<MultiPoly> body;

  static PolyLawRep identity(const FPModule& M);
  std::size_t target_rank() const { return body.size(); }
};

struct GradedPieceBasis {
  FPModule module;
  unsigned degree = 0;
  VarSet vars;
  /// Over a field-like ring: a basis over the coefficient field (k[t]/(f)
  /// elements are split along 1, t, ...). Over ZZ: a ZZ-basis.
  std::vector<MultiPoly> basis;
  std::size_t dimension() const { return basis.size(); }
};

/// Translation-invariant homogeneous polynomials of degree d in R[x_1..x_n].
GradedPieceBasis graded_piece(const FPModule& M, unsigned d);

/// Bihomogeneous piece of bidegree (d, e) of R[M (+) N], in variables x (M)
/// followed by y (N).
GradedPieceBasis bigraded_piece(const FPModule& M, const FPModule& N, unsigned d, unsigned e);

/// f o t_u == f for every u in the relation module (same vanishing rule as
/// graded_piece).
bool is_translation_invariant(const FPModule& M, const MultiPoly& f);

std::map<long, PolyLawRep> homogeneous_components(const PolyLawRep& phi);

/// Split after the first `split` variables.
std::map<std::pair<unsigned, unsigned>, PolyLawRep> bihomogeneous_components(const PolyLawRep& phi,
                                                                              std::size_t split);

struct ProductCheck {
  std::size_t direct = 0;  // dim R[M (+) N]_(d,e)
  std::size_t tensor = 0;  // dim R[M]_d (x)_R R[N]_e
  std::size_t dim_m = 0, dim_n = 0;
  bool equal() const { return direct == tensor; }
};

/// Dimensions over the coefficient field (ranks over ZZ).
ProductCheck product_ring_check(const FPModule& M, const FPModule& N, unsigned d, unsigned e);

/// gamma o phi.
PolyLawRep compose_laws(const PolyLawRep& gamma, const PolyLawRep& phi);

}  // namespace pfcalc
