#pragma once

#include "pfcalc/fpmod.hpp"
#include "pfcalc/multipoly.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pfcalc {

/// Immutable combinator tree for a polynomial functor over ZZ.
class FunctorExpr {
 public:
  enum class Kind { Const, Id, Sym, Ext, Tensor, DirectSum, Compose, Shift, Dual };

  /// The identity functor.
  FunctorExpr() : FunctorExpr(id()) {}

  static FunctorExpr constant(const FPModule& M);
  static FunctorExpr id();
  static FunctorExpr sym(unsigned d);
  static FunctorExpr ext(unsigned d);
  static FunctorExpr tensor(std::vector<FunctorExpr> children);
  static FunctorExpr direct_sum(std::vector<FunctorExpr> children);
  /// outer(inner(V)).
  static FunctorExpr compose(const FunctorExpr& outer, const FunctorExpr& inner);
  static FunctorExpr shift(unsigned m, const FunctorExpr& child);
  static FunctorExpr dual(const FunctorExpr& child);

  /// Text syntax: Sym(3), Ext(2), Id, Const(ZZ/2), Const(ZZ^2), Tensor(Id, Id),
  /// DirectSum(...), Compose(P, Q), Shift(1, P), Dual(P), and infix P (+) Q,
  /// P (x) Q.
  static FunctorExpr parse(const std::string& text);

  Kind kind() const { return node_->kind; }
  unsigned param() const { return node_->param; }
  const FPModule& module() const { return node_->module; }
  const std::vector<FunctorExpr>& children() const { return node_->children; }

  unsigned degree() const;
  /// True when every evaluation is a free module.
  bool is_free() const;
  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    unsigned param = 0;
    FPModule module;
    std::vector<FunctorExpr> children;
  };
  explicit FunctorExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Dense matrix of polynomials sharing one VarSet.
struct PolyMatrix {
  std::size_t rows = 0, cols = 0;
  VarSet vars;
  BaseRing ring = BaseRing::integers();
  std::vector<MultiPoly> entries;  // row-major

  PolyMatrix() = default;
  PolyMatrix(const BaseRing& r, const VarSet& v, std::size_t rows, std::size_t cols);
  static PolyMatrix identity(const BaseRing& r, const VarSet& v, std::size_t n);
  /// Constant matrix from integers.
  static PolyMatrix from_integers(const std::vector<std::vector<long>>& m, const VarSet& v = {});
  /// Same with an explicit column count, for matrices without rows.
  static PolyMatrix from_integers(const std::vector<std::vector<long>>& m, std::size_t cols, const VarSet& v = {});
  /// The generic n_tgt x n_src matrix with entries named <stem>ij.
  static PolyMatrix generic(std::size_t rows, std::size_t cols, const std::string& stem = "phi");

  MultiPoly& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const MultiPoly& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  PolyMatrix transpose() const;
  PolyMatrix substitute(const std::vector<MultiPoly>& images) const;
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) { return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries; }
  /// Entries as integers; throws if some entry is not constant.
  IntMatrix to_integers() const;
};

struct FunctorEval {
  FunctorExpr expr;
  std::size_t n = 0;
  FPModule module;
  std::vector<std::string> labels;
};

/// P(R^n) with its basis labels (memoized).
FunctorEval evaluate(const FunctorExpr& expr, std::size_t n);

/// P(phi) for phi: R^n_src -> R^n_tgt given as an n_tgt x n_src matrix of
/// polynomials; the result is dim P(R^n_tgt) x dim P(R^n_src).
PolyMatrix apply_law(const FunctorExpr& expr, const PolyMatrix& phi);

/// Symbolic law: apply_law at the generic matrix in variables phi_ij.
PolyMatrix symbolic_law(const FunctorExpr& expr, std::size_t n_src, std::size_t n_tgt);

/// Degree i -> basis (integer column vectors) of the degree-i part of P(R^n).
std::map<unsigned, std::vector<std::vector<mpz_class>>> homogeneous_parts(const FunctorExpr& expr, std::size_t n);

struct ShiftDecomposition {
  std::size_t m = 0, n = 0;
  /// Idempotent P(iota o pi) on P(R^(m+n)).
  IntMatrix idempotent;
  std::vector<std::vector<mpz_class>> p_part;  // image of e
  std::vector<std::vector<mpz_class>> q_part;  // kernel of e
  /// Largest degree occurring in the Q part (-1 if Q = 0).
  long q_degree = -1;
};

ShiftDecomposition shift_decompose(const FunctorExpr& expr, unsigned m, std::size_t n);

/// dim over K_p of the Q part of a shift decomposition.
std::size_t q_fiber_dimension(const FunctorExpr& expr, const ShiftDecomposition& sd, std::uint64_t p);

struct DimPolynomial {
  /// Values f(0..window).
  std::vector<long> values;
  /// f(n) = sum_k binomial_coeffs[k] * C(n, k).
  std::vector<mpz_class> binomial_coeffs;
  /// f(n) = sum_k monomial_coeffs[k] * n^k.
  std::vector<mpq_class> monomial_coeffs;
  long degree() const;
  std::string to_string() const;
  friend bool operator==(const DimPolynomial& a, const DimPolynomial& b) { return a.binomial_coeffs == b.binomial_coeffs; }
};

struct DimReport {
  FunctorExpr expr;
  std::size_t window = 0;
  std::map<std::uint64_t, DimPolynomial> per_prime;  // includes 0
  std::map<std::uint64_t, std::vector<long>> recursion_values;
  std::vector<std::uint64_t> flagged;  // f_p != f_0
  const DimPolynomial& generic() const { return per_prime.at(0); }
};

/// Internal-consistency failure between the two dimension computations.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

DimReport dimension_function(const FunctorExpr& expr, const std::vector<std::uint64_t>& primes, std::size_t window);

/// Fits the interpolating polynomial of degree <= max_degree through
/// values at 0..k; throws ConsistencyError if the extra points disagree.
DimPolynomial fit_dimension_polynomial(const std::vector<long>& values, unsigned max_degree);

/// Evaluation of the dual functor (shorthand for evaluate(Dual(expr), n)).
FunctorEval dual(const FunctorExpr& expr, std::size_t n);

}  // namespace pfcalc
