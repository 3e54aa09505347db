#pragma once

#include "pfcalc/linalg.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pfcalc {

/// M = R^n / O where O is spanned by the relation rows.
struct FPModule {
  BaseRing ring;
  std::size_t ngens = 0;
  std::vector<std::vector<RingElem>> relations;

  FPModule() = default;
  FPModule(BaseRing r, std::size_t n, std::vector<std::vector<RingElem>> rels = {});

  static FPModule free(const BaseRing& r, std::size_t n) { return FPModule(r, n); }
  /// Module over ZZ from integer relation rows.
  static FPModule integral(std::size_t n, const std::vector<std::vector<long>>& rows);

  bool is_free() const { return relations.empty(); }
  /// Relations as an integer matrix; ZZ modules only.
  IntMatrix integer_relations() const;
  /// M (+) N with relations placed block-diagonally.
  FPModule direct_sum(const FPModule& other) const;
};

/// dim over K_p of K_p (x) M for a module over ZZ (p = 0 gives QQ).
std::size_t fiber_dimension(const FPModule& M, std::uint64_t p);

/// Same number read off the elementary divisors of the presentation.
std::size_t fiber_dimension_from_smith(const FPModule& M, std::uint64_t p);

/// dim over K_p of the image of N in K_p (x) M.
std::size_t submodule_fiber_dimension(const FPModule& M, const std::vector<std::vector<mpz_class>>& N,
                                      std::uint64_t p);

struct FreenessCertificate {
  mpz_class r;
  /// v_1..v_k lie in N, v_{k+1}..v_m complete them to a basis of M[1/r].
  std::vector<std::vector<mpz_class>> basis_vectors;
  std::size_t k = 0;
  /// Index into the candidate list (N generators, then e_1..e_n) of each v_i.
  std::vector<std::size_t> basis_indices;
  std::vector<std::vector<mpz_class>> complement_vectors() const {
    return {basis_vectors.begin() + static_cast<std::ptrdiff_t>(k), basis_vectors.end()};
  }
  std::size_t m() const { return basis_vectors.size(); }
};

/// Clearing-denominators construction over ZZ: picks v_i greedily over QQ,
/// then multiplies into r every pivot of the elimination and every
/// denominator needed to write the remaining generators in terms of the v_i.
FreenessCertificate generic_freeness(const FPModule& M, const std::vector<std::vector<mpz_class>>& N);

struct SemicontinuityReport {
  std::size_t generic = 0;
  /// prime -> fiber dimension, including 0.
  std::map<std::uint64_t, std::size_t> dims;
  bool holds = true;
};

SemicontinuityReport semicontinuity_report(const FPModule& M, const std::vector<std::uint64_t>& primes);

}  // namespace pfcalc
