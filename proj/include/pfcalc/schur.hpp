#pragma once

#include "pfcalc/pfunctor.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pfcalc {

using RingMatrix = std::vector<std::vector<RingElem>>;

RingMatrix ring_matrix_product(const RingMatrix& a, const RingMatrix& b, const BaseRing& ring);
RingMatrix ring_identity(const BaseRing& ring, std::size_t n);

/// One nonzero structure constant: s_alpha * s_beta has coefficient c at s_gamma.
struct StructureConstant {
  std::size_t alpha, beta, gamma;
  mpz_class c;
};

class SchurElem;

/// S_{<=d}(U) for U of rank n over `ring`, with the distinguished basis s_alpha
/// indexed by n x n exponent matrices alpha (row-major) with |alpha| <= d.
class SchurAlgebra {
 public:
  SchurAlgebra(std::size_t n, unsigned d, BaseRing ring = BaseRing::integers());

  std::size_t n() const { return n_; }
  unsigned d() const { return d_; }
  const BaseRing& ring() const { return ring_; }
  std::size_t dimension() const { return table_->basis.size(); }
  /// Basis order: by |alpha|, then lex-decreasing.
  const std::vector<Monomial>& basis_index() const { return table_->basis; }
  std::size_t index_of(const Monomial& alpha) const;
  std::string alpha_to_string(std::size_t idx) const;

  /// Integer structure constants for s_alpha * s_beta.
  const std::vector<std::pair<std::size_t, mpz_class>>& product_terms(std::size_t alpha, std::size_t beta) const;
  /// All nonzero structure constants, ordered by (alpha, beta, gamma).
  std::vector<StructureConstant> structure_table() const;

  /// Same table over another ring.
  SchurAlgebra base_change(const BaseRing& ring) const;

 private:
  struct Table {
    std::vector<Monomial> basis;
    std::map<Monomial, std::size_t> index;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, mpz_class>>> products;
  };
  SchurAlgebra(std::size_t n, unsigned d, BaseRing ring, std::shared_ptr<const Table> t)
      : n_(n), d_(d), ring_(std::move(ring)), table_(std::move(t)) {}
  static std::shared_ptr<const Table> table_for(std::size_t n, unsigned d);

  std::size_t n_;
  unsigned d_;
  BaseRing ring_;
  std::shared_ptr<const Table> table_;
};

class SchurElem {
 public:
  explicit SchurElem(std::shared_ptr<const SchurAlgebra> A);
  static SchurElem basis(std::shared_ptr<const SchurAlgebra> A, std::size_t idx);

  const SchurAlgebra& algebra() const { return *A_; }
  const std::shared_ptr<const SchurAlgebra>& algebra_ptr() const { return A_; }
  const std::map<std::size_t, RingElem>& coefficients() const { return c_; }
  RingElem coefficient(std::size_t idx) const;
  void add(std::size_t idx, const RingElem& c);

  friend SchurElem operator*(const SchurElem& a, const SchurElem& b);
  friend SchurElem operator+(const SchurElem& a, const SchurElem& b);
  friend bool operator==(const SchurElem& a, const SchurElem& b) { return a.c_ == b.c_; }
  std::string to_string() const;

 private:
  std::shared_ptr<const SchurAlgebra> A_;
  std::map<std::size_t, RingElem> c_;
};

/// s_alpha * s_beta.
SchurElem structure_constants(const std::shared_ptr<const SchurAlgebra>& A, std::size_t alpha, std::size_t beta);

/// ev_id; checks e * s = s * e = s on the whole basis and throws if not.
SchurElem identity_element(const std::shared_ptr<const SchurAlgebra>& A);

/// ev_phi: coefficient x^alpha(phi) at s_alpha.
SchurElem evaluation_embed(const std::shared_ptr<const SchurAlgebra>& A, const RingMatrix& phi);

struct SchurModule {
  std::shared_ptr<const SchurAlgebra> algebra;
  std::size_t rank = 0;
  std::vector<std::string> labels;
  /// action[alpha] is the matrix phi_alpha.
  std::vector<RingMatrix> action;

  const BaseRing& ring() const { return algebra->ring(); }
  /// Matrix by which an algebra element acts.
  RingMatrix matrix_of(const SchurElem& s) const;
  std::vector<RingElem> apply(std::size_t alpha, const std::vector<RingElem>& v) const;
};

/// P(U) as an S_{<=d}(U)-module over ZZ, read off the symbolic law
/// P(sum x_ij E_ij) = sum x^alpha phi_alpha.
SchurModule module_of_functor(const FunctorEval& P, unsigned d);

/// Reduction of an integral module into K_p (QQ for p = 0).
SchurModule base_change_module(const SchurModule& M, std::uint64_t p);

/// Smallest action-stable subspace containing v (reduced echelon basis);
/// field coefficients only.
std::vector<std::vector<RingElem>> spin(const SchurModule& M, const std::vector<RingElem>& v);

struct IrreducibilityProbe {
  bool proper_submodule_found = false;
  std::vector<std::vector<RingElem>> smallest;  // smallest nonzero spin seen
  std::size_t spins = 0;
};

/// Spins from every basis vector and from `samples` random vectors; a
/// proper nonzero spin proves reducibility, none found is only evidence.
IrreducibilityProbe probe_irreducibility(const SchurModule& M, std::size_t samples, std::uint64_t seed);

}  // namespace pfcalc
